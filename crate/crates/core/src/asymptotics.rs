//! Entropy, Bernoulli divergence and the leading-order approximations used to
//! turn combinatorial counts into exponentials.
//!
//! Conventions: natural logarithms throughout, `0·ln 0 = 0`, and `H` is the
//! standard nonnegative binary entropy.

use crate::error::{domain, Result};

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
#[inline]
pub(crate) fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Unchecked binary entropy. Callers guarantee `r ∈ [0, 1]`.
#[inline]
pub(crate) fn h(r: f64) -> f64 {
    let v = -(xlnx(r) + xlnx(1.0 - r));
    v.max(0.0)
}

/// Unchecked Bernoulli divergence; `p ∈ (0, 1)`, `x ∈ [0, 1]`.
#[inline]
pub(crate) fn kl(x: f64, p: f64) -> f64 {
    let mut v = xlnx(x) + xlnx(1.0 - x);
    if x > 0.0 {
        v -= x * p.ln();
    }
    if x < 1.0 {
        v -= (1.0 - x) * (-p).ln_1p();
    }
    v.max(0.0)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        domain(format!("{name} = {x} is outside [0, 1]"))
    }
}

/// Binary entropy `H(r) = −r ln r − (1−r) ln(1−r)` in nats.
pub fn entropy(r: f64) -> Result<f64> {
    check_unit("r", r)?;
    Ok(h(r))
}

/// Entropy of a point on the probability simplex.
pub fn entropy_multi(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return domain("empty probability vector");
    }
    for &x in p {
        check_unit("component", x)?;
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return domain(format!("components sum to {total}, not 1"));
    }
    Ok(-p.iter().map(|&x| xlnx(x)).sum::<f64>())
}

/// Divergence between Bernoulli(x) and Bernoulli(p).
///
/// `p` must lie strictly inside `(0, 1)`; the divergence would be infinite
/// (or undefined) otherwise and is refused instead of returned as `inf`.
pub fn kl_bernoulli(x: f64, p: f64) -> Result<f64> {
    check_unit("x", x)?;
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("p = {p} must lie in (0, 1)"));
    }
    Ok(kl(x, p))
}

/// `n·H(k/n)`, the Stirling estimate of `ln C(n, k)`.
///
/// Overestimates the exact value by `O(ln n)`.
pub fn log_binom_approx(n: u64, k: u64) -> Result<f64> {
    if n == 0 || k > n {
        return domain(format!("need 0 <= k <= n, n >= 1 (got n = {n}, k = {k})"));
    }
    Ok(n as f64 * h(k as f64 / n as f64))
}

/// `−n·KL(k/n, p)`, the estimate of `ln[C(n,k) p^k (1−p)^(n−k)]`.
pub fn log_binom_tail_approx(n: u64, k: u64, p: f64) -> Result<f64> {
    if n == 0 || k > n {
        return domain(format!("need 0 <= k <= n, n >= 1 (got n = {n}, k = {k})"));
    }
    Ok(-(n as f64) * kl_bernoulli(k as f64 / n as f64, p)?)
}

/// An integral `∫_lo^hi exp{n f(x)} dx` whose integrand peaks at `lo`.
pub struct LaplaceProblem<F, D> {
    pub f: F,
    pub f_prime: D,
    pub lo: f64,
    pub hi: f64,
    pub n: f64,
}

impl<F, D> LaplaceProblem<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    pub fn new(f: F, f_prime: D, lo: f64, hi: f64, n: f64) -> Result<Self> {
        if !(lo < hi) {
            return domain(format!("empty interval [{lo}, {hi}]"));
        }
        if !(n > 0.0 && n.is_finite()) {
            return domain(format!("scale n = {n} must be positive"));
        }
        Ok(Self { f, f_prime, lo, hi, n })
    }
}

/// First-order boundary Laplace approximation of `ln ∫ exp{n f}`.
///
/// Returns `n f(lo) − ln(n |f'(lo)|)`. The slope at the boundary must be
/// strictly negative: a zero slope is the interior/critical-point case and a
/// positive slope means the maximum is not at `lo`.
pub fn laplace_boundary<F, D>(problem: &LaplaceProblem<F, D>) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let slope = (problem.f_prime)(problem.lo);
    if slope == 0.0 || !slope.is_finite() {
        return domain(format!("f'(lo) = {slope}: boundary is a critical point"));
    }
    if slope > 0.0 {
        return domain(format!("f'(lo) = {slope} > 0: maximum is not at the lower boundary"));
    }
    Ok(problem.n * (problem.f)(problem.lo) - (problem.n * slope.abs()).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_values() {
        assert_abs_diff_eq!(entropy(0.5).unwrap(), LN_2, epsilon = 1e-15);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        let r: f64 = 4.0 / 9.0;
        let direct = -(r * r.ln()) - (1.0 - r) * (1.0 - r).ln();
        assert_abs_diff_eq!(entropy(r).unwrap(), direct, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy(r).unwrap(), 0.686_962_1, epsilon = 1e-6);
    }

    #[test]
    fn entropy_rejects_outside_unit_interval() {
        assert!(entropy(-0.01).is_err());
        assert!(entropy(1.5).is_err());
        assert!(entropy(f64::NAN).is_err());
    }

    #[test]
    fn multinomial_entropy() {
        let third = 1.0 / 3.0;
        assert_abs_diff_eq!(entropy_multi(&[third, third, third]).unwrap(), 3f64.ln(), epsilon = 1e-12);
        assert_eq!(entropy_multi(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(entropy_multi(&[0.5, 0.25, 0.25]).unwrap(), 1.5 * LN_2, epsilon = 1e-15);
        assert!(entropy_multi(&[0.5, 0.4]).is_err());
        assert!(entropy_multi(&[1.2, -0.2]).is_err());
        assert!(entropy_multi(&[]).is_err());
    }

    #[test]
    fn kl_values() {
        for p in [0.01, 0.1, 0.37, 0.5, 0.9] {
            assert_abs_diff_eq!(kl_bernoulli(p, p).unwrap(), 0.0, epsilon = 1e-15);
        }
        let expected = 0.5 * 5f64.ln() + 0.5 * (5.0f64 / 9.0).ln();
        assert_abs_diff_eq!(kl_bernoulli(0.5, 0.1).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(kl_bernoulli(0.5, 0.1).unwrap(), 0.510_826, epsilon = 1e-6);
        assert_abs_diff_eq!(kl_bernoulli(0.0, 0.3).unwrap(), -(0.7f64.ln()), epsilon = 1e-15);
        assert_abs_diff_eq!(kl_bernoulli(1.0, 0.3).unwrap(), -(0.3f64.ln()), epsilon = 1e-15);
    }

    #[test]
    fn kl_refuses_degenerate_reference() {
        assert!(kl_bernoulli(0.5, 0.0).is_err());
        assert!(kl_bernoulli(0.5, 1.0).is_err());
        assert!(kl_bernoulli(1.1, 0.5).is_err());
    }

    #[test]
    fn binomial_log_approximation() {
        assert_abs_diff_eq!(log_binom_approx(100, 50).unwrap(), 100.0 * LN_2, epsilon = 1e-12);
        assert_eq!(log_binom_approx(17, 0).unwrap(), 0.0);
        assert_eq!(log_binom_approx(17, 17).unwrap(), 0.0);
        assert_abs_diff_eq!(log_binom_approx(9, 4).unwrap(), 6.182_654_19, epsilon = 1e-8);
        assert!(log_binom_approx(3, 4).is_err());
        assert!(log_binom_approx(0, 0).is_err());
    }

    #[test]
    fn tail_log_approximation() {
        assert_abs_diff_eq!(log_binom_tail_approx(20, 4, 0.2).unwrap(), 0.0, epsilon = 1e-12);
        let expected = -20.0 * (0.5 * 5f64.ln() + 0.5 * (5.0f64 / 9.0).ln());
        assert_abs_diff_eq!(log_binom_tail_approx(20, 10, 0.1).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(log_binom_tail_approx(20, 10, 0.1).unwrap(), -10.216_5, epsilon = 1e-4);
        assert_abs_diff_eq!(
            log_binom_tail_approx(50, 0, 0.2).unwrap(),
            50.0 * 0.8f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn laplace_closed_forms() {
        let p = LaplaceProblem::new(|x: f64| -x, |_| -1.0, 0.0, 1.0, 100.0).unwrap();
        assert_abs_diff_eq!(laplace_boundary(&p).unwrap(), -(100f64.ln()), epsilon = 1e-12);
        let p = LaplaceProblem::new(|x: f64| -2.0 * x, |_| -2.0, 0.0, 1.0, 50.0).unwrap();
        assert_abs_diff_eq!(laplace_boundary(&p).unwrap(), -(100f64.ln()), epsilon = 1e-12);
    }

    #[test]
    fn laplace_rejects_critical_points() {
        let p = LaplaceProblem::new(|x: f64| -x * x, |x: f64| -2.0 * x, 0.0, 1.0, 10.0).unwrap();
        assert!(laplace_boundary(&p).is_err());
        let p = LaplaceProblem::new(|x: f64| x, |_| 1.0, 0.0, 1.0, 10.0).unwrap();
        assert!(laplace_boundary(&p).is_err());
        assert!(LaplaceProblem::new(|x: f64| x, |_| 1.0, 1.0, 1.0, 10.0).is_err());
    }
}
