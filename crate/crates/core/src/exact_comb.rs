//! Exact combinatorics: the ground truth every approximation is measured
//! against.
//!
//! Binomials are arbitrary-precision integers. Probabilities built from them
//! are exact rationals up to `N = 256` ([`EXACT_LIMIT`]); above that the `f64`
//! entry points switch to log-domain floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::asymptotics::h;
use crate::designer::{Cost, DesignMode, DesignSolution};
use crate::error::{invalid, Error, Result};
use crate::exponents::ChannelModel;

/// Largest `N` (or `u`) for which probabilities are evaluated with exact
/// rational arithmetic.
pub const EXACT_LIMIT: u64 = 256;

/// Code geometry: `n` units of which `a` are active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    n: u64,
    a: u64,
}

impl CodeParams {
    pub fn new(n: u64, a: u64) -> Result<Self> {
        if n == 0 {
            return invalid("N must be at least 1");
        }
        if a > n {
            return invalid(format!("a = {a} exceeds N = {n}"));
        }
        Ok(Self { n, a })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    /// Activity ratio `a / N`.
    pub fn r(&self) -> f64 {
        self.a as f64 / self.n as f64
    }

    /// Exact activity ratio.
    pub fn r_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.a), BigInt::from(self.n))
    }

    /// Smallest possible overlap between two weight-`a` words.
    pub fn min_overlap(&self) -> u64 {
        (2 * self.a).saturating_sub(self.n)
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, a={}", self.n, self.a)
    }
}

/// Number of codewords a code must provide, `|W| = e^{ρN}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordBudget {
    count: BigUint,
}

impl WordBudget {
    pub fn new(count: BigUint) -> Result<Self> {
        if count.is_zero() {
            return invalid("word budget must be at least 1");
        }
        Ok(Self { count })
    }

    pub fn from_u64(count: u64) -> Result<Self> {
        Self::new(BigUint::from(count))
    }

    /// The smallest budget with `ln|W| ≥ ρN`, i.e. `⌈exp(ρN)⌉`.
    pub fn from_rho(rho: f64, n: u64) -> Result<Self> {
        let x = rho * n as f64;
        if !(x >= 0.0) || !x.is_finite() {
            return invalid(format!("rate {rho} gives no finite word count"));
        }
        let count = num_traits::FromPrimitive::from_f64(x.exp().ceil())
            .ok_or_else(|| Error::InvalidParams(format!("exp({x}) is not representable")))?;
        Self::new(count)
    }

    pub fn count(&self) -> &BigUint {
        &self.count
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.count.to_u64()
    }

    /// `ln|W|`.
    pub fn ln_count(&self) -> f64 {
        ln_biguint(&self.count)
    }

    /// The rate `ρ = ln|W| / N`, recomputed on every call.
    pub fn rho(&self, n: u64) -> f64 {
        self.ln_count() / n as f64
    }
}

impl fmt::Display for WordBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.count)
    }
}

/// Distance enumerator: `D[o]` counts codewords overlapping a reference word
/// in exactly `o` active units. Indexed by `o ∈ 0..=a`; entries below the
/// hypergeometric support are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapSpectrum {
    params: CodeParams,
    counts: Vec<u64>,
}

impl OverlapSpectrum {
    pub fn zero(params: CodeParams) -> Self {
        Self { params, counts: vec![0; params.a as usize + 1] }
    }

    pub fn new(params: CodeParams, counts: &BTreeMap<u64, u64>) -> Result<Self> {
        let mut spectrum = Self::zero(params);
        for (&o, &c) in counts {
            spectrum.add(o, c)?;
        }
        Ok(spectrum)
    }

    pub fn add(&mut self, o: u64, count: u64) -> Result<()> {
        if o > self.params.a || o < self.params.min_overlap() {
            return invalid(format!(
                "overlap {o} outside the support [{}, {}]",
                self.params.min_overlap(),
                self.params.a
            ));
        }
        self.counts[o as usize] += count;
        Ok(())
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn get(&self, o: u64) -> u64 {
        self.counts.get(o as usize).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(o, D[o])` over the full support, including zero entries.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let lo = self.params.min_overlap();
        (lo..=self.params.a).map(move |o| (o, self.counts[o as usize]))
    }
}

/// Exact binomial coefficient; zero when `k < 0` or `k > n`.
pub fn binom_exact(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The full row `C(n, 0..=n)`.
pub fn binom_row(n: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// `C(N, a) ≥ |W|`: the code has enough distinct words.
pub fn feasible(params: CodeParams, budget: &WordBudget) -> bool {
    binom_exact(params.n, params.a as i64) >= *budget.count()
}

/// Probability that a uniformly drawn weight-`draws` word overlaps a fixed
/// weight-`k` word of length `n` in exactly `o` units.
pub fn hypergeometric_pmf_exact(n: u64, k: u64, draws: u64, o: i64) -> BigRational {
    if k > n || draws > n {
        return BigRational::zero();
    }
    let num = binom_exact(k, o) * binom_exact(n - k, draws as i64 - o);
    BigRational::new(num.into(), binom_exact(n, draws as i64).into())
}

/// Probability that two independent uniform weight-`a` words overlap in `o`
/// units.
pub fn overlap_pmf_exact(params: CodeParams, o: i64) -> BigRational {
    hypergeometric_pmf_exact(params.n, params.a, params.a, o)
}

/// Floating-point overlap probability; exact up to [`EXACT_LIMIT`], log-domain
/// beyond.
pub fn overlap_pmf(params: CodeParams, o: i64) -> f64 {
    if o < params.min_overlap() as i64 || o > params.a as i64 {
        return 0.0;
    }
    if params.n <= EXACT_LIMIT {
        return overlap_pmf_exact(params, o).to_f64().unwrap_or(0.0);
    }
    let (n, a, o) = (params.n, params.a, o as u64);
    (ln_binom(a, o) + ln_binom(n - a, a - o) - ln_binom(n, a)).exp()
}

/// Upper tails `Q[t] = Pr[overlap ≥ t]` for `t = 0..=draws+1`, where the
/// overlap is between a fixed weight-`k` word and a uniform weight-`draws`
/// word of length `n`.
pub(crate) fn overlap_upper_tails(n: u64, k: u64, draws: u64) -> Vec<f64> {
    let len = draws as usize + 2;
    let mut tails = vec![0.0; len];
    if n <= EXACT_LIMIT {
        let total = BigInt::from(binom_exact(n, draws as i64));
        let mut acc = BigUint::zero();
        for o in (0..=draws).rev() {
            acc += binom_exact(k, o as i64) * binom_exact(n - k, draws as i64 - o as i64);
            tails[o as usize] = BigRational::new(BigInt::from(acc.clone()), total.clone())
                .to_f64()
                .unwrap_or(0.0);
        }
    } else {
        let ln_total = ln_binom(n, draws);
        let mut acc = f64::NEG_INFINITY;
        for o in (0..=draws).rev() {
            if o <= k && draws - o <= n - k {
                let term = ln_binom(k, o) + ln_binom(n - k, draws - o) - ln_total;
                acc = log_add(acc, term);
            }
            tails[o as usize] = acc.exp().min(1.0);
        }
    }
    tails
}

/// Exact `Pr[j + i ≥ u]` for `j ~ Bin(u, p10)`, `i ~ Bin(u, p01)`, with the
/// channel probabilities taken as the exact binary fractions they are stored
/// as.
///
/// This is the probability that a word sharing `a − u` active units with the
/// sent word scores at least as high under the overlap decoder (ties count
/// as errors).
pub fn pairwise_error_rational(u: u64, channel: &ChannelModel) -> BigRational {
    let (n10, d10) = dyadic_parts(channel.p10());
    let (n01, d01) = dyadic_parts(channel.p01());
    let m10 = &d10 - &n10;
    let m01 = &d01 - &n01;
    let row = binom_row(u);
    let weights = |p: &BigUint, q: &BigUint| -> Vec<BigUint> {
        let p_pows = powers(p, u);
        let q_pows = powers(q, u);
        (0..=u as usize)
            .map(|j| &row[j] * &p_pows[j] * &q_pows[u as usize - j])
            .collect()
    };
    let flips10 = weights(&n10, &m10);
    let flips01 = weights(&n01, &m01);
    // tail[t] = Σ_{i ≥ t} flips01[i]
    let mut tail = vec![BigUint::zero(); u as usize + 2];
    for i in (0..=u as usize).rev() {
        tail[i] = &tail[i + 1] + &flips01[i];
    }
    let num: BigUint = flips10
        .iter()
        .enumerate()
        .map(|(j, w)| w * &tail[u as usize - j])
        .sum();
    let den = d10.pow(u as u32) * d01.pow(u as u32);
    BigRational::new(num.into(), den.into())
}

/// `ln Pr[j + i ≥ u]`; accurate even when the probability underflows `f64`.
pub fn pairwise_error_ln(u: u64, channel: &ChannelModel) -> f64 {
    if u <= EXACT_LIMIT {
        ln_ratio(&pairwise_error_rational(u, channel))
    } else {
        pairwise_error_ln_float(u, channel)
    }
}

/// `Pr[j + i ≥ u]` as `f64`; `1` when `u = 0`.
pub fn pairwise_error_exact(u: u64, channel: &ChannelModel) -> f64 {
    if u <= EXACT_LIMIT {
        pairwise_error_rational(u, channel).to_f64().unwrap_or(0.0)
    } else {
        pairwise_error_ln_float(u, channel).exp()
    }
}

fn pairwise_error_ln_float(u: u64, channel: &ChannelModel) -> f64 {
    let lpmf = |p: f64| -> Vec<f64> {
        (0..=u)
            .map(|j| ln_binom(u, j) + mul_ln(j, p) + mul_ln(u - j, 1.0 - p))
            .collect()
    };
    let flips10 = lpmf(channel.p10());
    let flips01 = lpmf(channel.p01());
    let mut tail = vec![f64::NEG_INFINITY; u as usize + 2];
    for i in (0..=u as usize).rev() {
        tail[i] = log_add(tail[i + 1], flips01[i]);
    }
    flips10
        .iter()
        .enumerate()
        .fold(f64::NEG_INFINITY, |acc, (j, &w)| log_add(acc, w + tail[u as usize - j]))
        .min(0.0)
}

/// Exhaustive scan of all `(a, N)` with `N ≤ n_max`, returning the cheapest
/// pair with `C(N, a) ≥ |W|`. Ties resolve to the smallest `N`, then the
/// smallest `a`.
pub fn brute_force_design(budget: &WordBudget, cost: &Cost, n_max: u64) -> Result<DesignSolution> {
    let mut best: Option<(u64, u64, f64)> = None;
    let mut row = vec![BigUint::one()];
    for n in 1..=n_max {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for k in 1..row.len() {
            next.push(&row[k - 1] + &row[k]);
        }
        next.push(BigUint::one());
        row = next;
        for (a, c) in row.iter().enumerate() {
            if c < budget.count() {
                continue;
            }
            let value = cost.evaluate(a as f64, n as f64);
            if best.is_none_or(|(_, _, b)| value < b) {
                best = Some((n, a as u64, value));
            }
        }
    }
    let (n, a, value) = best.ok_or_else(|| {
        Error::Infeasible(format!("no (a, N) with N <= {n_max} has C(N, a) >= {budget}"))
    })?;
    let r = a as f64 / n as f64;
    Ok(DesignSolution {
        mode: DesignMode::Noiseless,
        r_star: r,
        n_continuous: n as f64,
        a_int: a,
        n_int: n,
        cost: value,
        constraint_value: h(r),
        feasible: true,
    })
}

/// Natural log of an arbitrary-precision integer (`-inf` for zero).
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap_or(u64::MAX);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a nonnegative rational.
pub fn ln_ratio(x: &BigRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// `ln C(n, k)` via the log-gamma function.
pub(crate) fn ln_binom(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

// k·ln p with 0·ln 0 = 0
fn mul_ln(k: u64, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * p.ln()
    }
}

fn powers(base: &BigUint, max: u64) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut acc = BigUint::one();
    for _ in 0..=max {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

fn dyadic_parts(p: f64) -> (BigUint, BigUint) {
    let r = BigRational::from_float(p).expect("channel probabilities are finite");
    (
        r.numer().magnitude().clone(),
        r.denom().magnitude().clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designer::Cost;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ch(p10: f64, p01: f64) -> ChannelModel {
        ChannelModel::new(p10, p01).unwrap()
    }

    fn factorial(n: u64) -> BigUint {
        (1..=n).fold(BigUint::one(), |acc, k| acc * k)
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binom_exact(9, 4), BigUint::from(126u32));
        assert_eq!(binom_exact(9, 4), factorial(9) / (factorial(4) * factorial(5)));
        assert_eq!(binom_exact(7, 3), BigUint::from(35u32));
        for n in 0..20 {
            assert_eq!(binom_exact(n, 0), BigUint::one());
        }
        assert!(binom_exact(5, -1).is_zero());
        assert!(binom_exact(5, 6).is_zero());
        assert_eq!(binom_row(9)[4], BigUint::from(126u32));
    }

    #[test]
    fn pascal_rule_up_to_100() {
        for n in 1..=100u64 {
            for k in 0..=n as i64 {
                assert_eq!(binom_exact(n, k), binom_exact(n - 1, k - 1) + binom_exact(n - 1, k));
            }
        }
    }

    #[test]
    fn feasibility_examples() {
        let p = CodeParams::new(9, 4).unwrap();
        assert!(feasible(p, &WordBudget::from_u64(125).unwrap()));
        assert!(feasible(p, &WordBudget::from_u64(126).unwrap()));
        assert!(!feasible(p, &WordBudget::from_u64(127).unwrap()));
        assert!(feasible(CodeParams::new(1, 0).unwrap(), &WordBudget::from_u64(1).unwrap()));
    }

    #[test]
    fn params_validation() {
        assert!(CodeParams::new(0, 0).is_err());
        assert!(CodeParams::new(3, 4).is_err());
        assert!(WordBudget::from_u64(0).is_err());
        let b = WordBudget::from_rho(0.5, 20).unwrap();
        assert_eq!(b.to_u64(), Some(10f64.exp().ceil() as u64));
        assert!(b.rho(20) >= 0.5);
    }

    #[test]
    fn overlap_examples() {
        let p = CodeParams::new(7, 3).unwrap();
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(overlap_pmf_exact(p, 3), r(1, 35));
        assert_eq!(overlap_pmf_exact(p, 1), r(18, 35));
        assert_eq!(overlap_pmf_exact(p, 4), r(0, 1));
        assert_eq!(overlap_pmf_exact(p, -1), r(0, 1));
        let full = CodeParams::new(6, 6).unwrap();
        assert_eq!(overlap_pmf_exact(full, 6), r(1, 1));
        assert_abs_diff_eq!(overlap_pmf(p, 1), 18.0 / 35.0, epsilon = 1e-16);
    }

    #[test]
    fn overlap_sums_to_one_exactly() {
        for n in 1..=64u64 {
            for a in 0..=n {
                let p = CodeParams::new(n, a).unwrap();
                let total: BigRational = (0..=a as i64).map(|o| overlap_pmf_exact(p, o)).sum();
                assert!(total.is_one(), "N={n} a={a}");
            }
        }
    }

    #[test]
    fn overlap_log_domain_matches_exact() {
        // compare the large-N path against exact arithmetic just past the limit
        let p = CodeParams::new(300, 90).unwrap();
        for o in [10i64, 27, 40, 60] {
            let exact = overlap_pmf_exact(p, o).to_f64().unwrap();
            let approx = overlap_pmf(p, o);
            assert!(((approx - exact) / exact).abs() < 1e-11, "o={o}: {approx} vs {exact}");
        }
    }

    #[test]
    fn pairwise_examples() {
        assert_abs_diff_eq!(pairwise_error_exact(1, &ch(0.1, 0.1)), 0.19, epsilon = 1e-15);
        for c in [ch(0.0, 0.0), ch(0.3, 0.1), ch(1.0, 1.0)] {
            assert_eq!(pairwise_error_exact(0, &c), 1.0);
        }
        // brute-force 4x4 double sum for u = 3
        let (p10, p01) = (0.2f64, 0.05f64);
        let mut brute = 0.0;
        for j in 0..=3u64 {
            for i in 0..=3u64 {
                if i + j >= 3 {
                    let bj = binom_exact(3, j as i64).to_f64().unwrap();
                    let bi = binom_exact(3, i as i64).to_f64().unwrap();
                    brute += bj * p10.powi(j as i32) * (1.0 - p10).powi(3 - j as i32)
                        * bi * p01.powi(i as i32) * (1.0 - p01).powi(3 - i as i32);
                }
            }
        }
        assert_abs_diff_eq!(pairwise_error_exact(3, &ch(p10, p01)), brute, epsilon = 1e-15);
        assert_abs_diff_eq!(brute, 0.02454, epsilon = 1e-12);
    }

    #[test]
    fn pairwise_rational_is_exact_for_dyadic_probabilities() {
        // p = 1/4 is exactly representable: P(u=1) = 1 - (3/4)^2 = 7/16
        let p = pairwise_error_rational(1, &ch(0.25, 0.25));
        assert_eq!(p, BigRational::new(7.into(), 16.into()));
    }

    #[test]
    fn log_domain_path_agrees_with_exact_path() {
        let c = ch(0.1, 0.07);
        for u in [1u64, 10, 100, 256] {
            let exact = ln_ratio(&pairwise_error_rational(u, &c));
            let float = pairwise_error_ln_float(u, &c);
            assert!((exact - float).abs() <= 1e-12 * exact.abs().max(1.0), "u={u}");
        }
        // beyond the exact limit the value keeps decaying and stays finite
        let big = pairwise_error_ln(400, &c);
        assert!(big < pairwise_error_ln(256, &c));
        assert!(big.is_finite());
    }

    #[test]
    fn pairwise_monotone_on_grid() {
        let probs = [0.0, 0.01, 0.05, 0.1, 0.2, 0.35, 0.5];
        for &p10 in &probs {
            for &p01 in &probs {
                let c = ch(p10, p01);
                let values: Vec<f64> = (0..=24).map(|u| pairwise_error_exact(u, &c)).collect();
                for w in values.windows(2) {
                    assert!(w[1] <= w[0] + 1e-15, "u monotone at {p10},{p01}");
                }
                assert!(values.iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
        for u in [1u64, 4, 9, 16] {
            for pair in probs.windows(2) {
                for &other in &probs {
                    let lo = pairwise_error_exact(u, &ch(pair[0], other));
                    let hi = pairwise_error_exact(u, &ch(pair[1], other));
                    assert!(lo <= hi + 1e-15);
                    let lo = pairwise_error_exact(u, &ch(other, pair[0]));
                    let hi = pairwise_error_exact(u, &ch(other, pair[1]));
                    assert!(lo <= hi + 1e-15);
                }
            }
        }
    }

    #[test]
    fn brute_force_examples() {
        let cost = Cost::linear(1.0, 1.0).unwrap();
        let s = brute_force_design(&WordBudget::from_u64(125).unwrap(), &cost, 32).unwrap();
        assert_eq!((s.n_int, s.a_int, s.cost), (9, 4, 13.0));
        let s = brute_force_design(&WordBudget::from_u64(1).unwrap(), &cost, 8).unwrap();
        assert_eq!((s.n_int, s.a_int, s.cost), (1, 0, 1.0));
        let s = brute_force_design(&WordBudget::from_u64(2).unwrap(), &cost, 8).unwrap();
        assert_eq!((s.n_int, s.a_int, s.cost), (2, 1, 3.0));
        let err = brute_force_design(&WordBudget::from_u64(1000).unwrap(), &cost, 5);
        assert!(matches!(err, Err(Error::Infeasible(_))));
    }

    #[test]
    fn spectrum_support_is_enforced() {
        let p = CodeParams::new(7, 5).unwrap();
        let mut s = OverlapSpectrum::zero(p);
        assert!(s.add(2, 1).is_err());
        assert!(s.add(6, 1).is_err());
        s.add(3, 2).unwrap();
        s.add(5, 1).unwrap();
        assert_eq!(s.total(), 3);
        assert_eq!(s.iter().count(), 3);
    }

    #[test]
    fn upper_tails_match_exact_pmf() {
        let tails = overlap_upper_tails(20, 7, 5);
        for t in 0..=6u64 {
            let exact: BigRational =
                (t as i64..=5).map(|o| hypergeometric_pmf_exact(20, 7, 5, o)).sum();
            assert_abs_diff_eq!(tails[t as usize], exact.to_f64().unwrap(), epsilon = 1e-15);
        }
        let big = overlap_upper_tails(400, 150, 120);
        assert!((big[0] - 1.0).abs() < 1e-12);
        assert!(big.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn ln_biguint_handles_huge_values() {
        let x = BigUint::from(2u32).pow(3000);
        assert_abs_diff_eq!(ln_biguint(&x), 3000.0 * std::f64::consts::LN_2, epsilon = 1e-9);
        assert_abs_diff_eq!(ln_biguint(&BigUint::from(126u32)), 126f64.ln(), epsilon = 1e-14);
    }

    proptest! {
        #[test]
        fn pairwise_is_a_probability(u in 0u64..40, p10 in 0.0f64..1.0, p01 in 0.0f64..1.0) {
            let v = pairwise_error_exact(u, &ch(p10, p01));
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn pascal_rule(n in 1u64..400, k in 0i64..400) {
            prop_assert_eq!(binom_exact(n, k), binom_exact(n - 1, k - 1) + binom_exact(n - 1, k));
        }
    }
}
