//! Error exponents for overlap decoding over an asymmetric bit-flip channel.
//!
//! * `I(p10, p01)`: decay rate of the pairwise confusion probability per
//!   non-shared active unit, `Pr ~ exp{−u I}`.
//! * `G(r)`: random-code reliability exponent; with `|W| = e^{ρN}` the block
//!   error behaves like `exp{N(ρ − G(r))}`.

use serde::{Deserialize, Serialize};

use crate::asymptotics::{h, kl};
use crate::error::{domain, invalid, Result};
use crate::exact_comb::{pairwise_error_exact, pairwise_error_ln, CodeParams, OverlapSpectrum, WordBudget};
use crate::optimize::{grid_then_golden, linspace};

/// Grid size used when a caller does not pick one.
pub const DEFAULT_GRID: usize = 4096;

/// Smallest grid accepted by the exponent minimisers.
pub const MIN_GRID: usize = 100;

/// Argument tolerance of the golden-section refinement.
const ARG_TOL: f64 = 1e-9;

/// Independent asymmetric bit flips: `p10` for active units, `p01` for
/// inactive ones.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    p10: f64,
    p01: f64,
}

impl ChannelModel {
    /// Any pair of probabilities in `[0, 1]`. Analysis operations further
    /// restrict both to `(0, 0.5]`.
    pub fn new(p10: f64, p01: f64) -> Result<Self> {
        for (name, p) in [("p10", p10), ("p01", p01)] {
            if !(0.0..=1.0).contains(&p) {
                return invalid(format!("{name} = {p} is not a probability"));
            }
        }
        Ok(Self { p10, p01 })
    }

    pub fn noiseless() -> Self {
        Self { p10: 0.0, p01: 0.0 }
    }

    pub fn p10(&self) -> f64 {
        self.p10
    }

    pub fn p01(&self) -> f64 {
        self.p01
    }

    pub fn q10(&self) -> f64 {
        1.0 - self.p10
    }

    pub fn q01(&self) -> f64 {
        1.0 - self.p01
    }

    /// Checks the `(0, 0.5]` range required by the exponent computations.
    pub fn check_analysis(&self) -> Result<()> {
        for (name, p) in [("p10", self.p10), ("p01", self.p01)] {
            if p == 0.0 {
                return domain(format!(
                    "{name} = 0 makes the exponent infinite; use the exact pairwise probability"
                ));
            }
            if !(p > 0.0 && p <= 0.5) {
                return domain(format!("{name} = {p} is outside (0, 0.5]"));
            }
        }
        Ok(())
    }
}

/// Minimiser of `KL(x, p10) + KL(y, p01)` over `x + y ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairwiseExponent {
    pub i_value: f64,
    pub x_star: f64,
    pub y_star: f64,
}

/// `G(r)` and the overlap fraction that attains it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomCodeExponent {
    pub g_value: f64,
    pub z_star: f64,
}

/// Combined exponent report for a channel and (optionally) an activity ratio.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub i_value: f64,
    pub x_star: f64,
    pub y_star: f64,
    pub r: Option<f64>,
    pub g_value: Option<f64>,
    pub z_star: Option<f64>,
    pub entropy: Option<f64>,
}

/// `I(p10, p01)`: grid search over the constraint line `x + y = 1`, refined by
/// golden section. For `p10, p01 ≤ 1/2` the unconstrained minimiser
/// `(p10, p01)` is infeasible, so the minimum sits on that line.
pub fn pairwise_exponent(channel: &ChannelModel, grid: usize) -> Result<PairwiseExponent> {
    channel.check_analysis()?;
    check_grid(grid)?;
    let (p10, p01) = (channel.p10, channel.p01);
    let objective = |x: f64| kl(x, p10) + kl(1.0 - x, p01);
    let (x, value) = grid_then_golden(&objective, &linspace(0.0, 1.0, grid), 1, ARG_TOL);
    Ok(PairwiseExponent { i_value: value, x_star: x, y_star: 1.0 - x })
}

/// One row of [`exponent_vs_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub u: u64,
    pub p_exact: f64,
    pub ln_p: f64,
    /// `−ln(P)/u`.
    pub normalized: f64,
    pub i_value: f64,
}

/// Exact pairwise error against its exponential approximation for each `u`.
pub fn exponent_vs_exact(u_list: &[u64], channel: &ChannelModel, grid: usize) -> Result<Vec<ConvergenceRow>> {
    if u_list.contains(&0) {
        return domain("u = 0 has no normalised exponent (the probability is 1)");
    }
    let i_value = pairwise_exponent(channel, grid)?.i_value;
    Ok(u_list
        .iter()
        .map(|&u| {
            let ln_p = pairwise_error_ln(u, channel);
            ConvergenceRow { u, p_exact: ln_p.exp(), ln_p, normalized: -ln_p / u as f64, i_value }
        })
        .collect())
}

fn overlap_domain_lo(r: f64) -> f64 {
    ((2.0 * r - 1.0) / r).max(0.0)
}

// (1−z)r/(1−r), clamped against rounding at the ends of the overlap domain
fn disjoint_fraction(r: f64, z: f64) -> f64 {
    let v = (1.0 - z) * r / (1.0 - r);
    if v > 1.0 && v < 1.0 + 1e-12 {
        1.0
    } else if v < 0.0 && v > -1e-12 {
        0.0
    } else {
        v
    }
}

/// Per-unit log of the expected number of codewords overlapping a random
/// reference in a fraction `z` of its active units:
/// `ρ + r H(z) + (1−r) H((1−z)r/(1−r)) − H(r)`.
pub fn expected_log_enumerator(r: f64, z: f64, rho: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("r = {r} must lie in (0, 1)"));
    }
    if !(0.0..=1.0).contains(&z) {
        return domain(format!("z = {z} must lie in [0, 1]"));
    }
    if !(rho >= 0.0) {
        return domain(format!("rho = {rho} must be nonnegative"));
    }
    let w = disjoint_fraction(r, z);
    if !(0.0..=1.0).contains(&w) {
        return domain(format!("(1-z)r/(1-r) = {w} is outside [0, 1] for r = {r}, z = {z}"));
    }
    Ok(rho + r * h(z) + (1.0 - r) * h(w) - h(r))
}

/// `G(r) = min_z [H(r) + r(1−z)I − rH(z) − (1−r)H((1−z)r/(1−r))]` over the
/// rescaled hypergeometric support `z ∈ [max(0, (2r−1)/r), 1]`.
pub fn g_of_r(r: f64, channel: &ChannelModel, grid: usize) -> Result<RandomCodeExponent> {
    let i_value = pairwise_exponent(channel, grid)?.i_value;
    g_with_i(r, i_value, grid)
}

pub(crate) fn g_with_i(r: f64, i_value: f64, grid: usize) -> Result<RandomCodeExponent> {
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("r = {r} must lie in (0, 1)"));
    }
    check_grid(grid)?;
    let hr = h(r);
    let bracket = |z: f64| {
        let w = disjoint_fraction(r, z).clamp(0.0, 1.0);
        hr + r * (1.0 - z) * i_value - r * h(z) - (1.0 - r) * h(w)
    };
    let zs = linspace(overlap_domain_lo(r), 1.0, grid);
    let (z, g) = grid_then_golden(&bracket, &zs, 1, ARG_TOL);
    Ok(RandomCodeExponent { g_value: g.max(0.0), z_star: z })
}

/// Full report for the CLI: `I` always, `G(r)` when `r` is given.
pub fn exponent_report(channel: &ChannelModel, r: Option<f64>, grid: usize) -> Result<ExponentReport> {
    let pair = pairwise_exponent(channel, grid)?;
    let g = r.map(|r| g_with_i(r, pair.i_value, grid)).transpose()?;
    Ok(ExponentReport {
        i_value: pair.i_value,
        x_star: pair.x_star,
        y_star: pair.y_star,
        r,
        g_value: g.map(|g| g.g_value),
        z_star: g.map(|g| g.z_star),
        entropy: r.map(h),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `ρ < G(r)`: error probability vanishes with `N`.
    Below,
    /// `ρ ≥ G(r)`, boundary included.
    Above,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub verdict: Verdict,
    pub rho: f64,
    pub g_value: f64,
    /// `G − ρ`.
    pub margin: f64,
    /// Predicted `ln p× = N(ρ − G)`.
    pub predicted_log_p: f64,
}

/// Compares the rate `ρ = ln|W|/N` against `G(a/N)`.
pub fn threshold_check(params: CodeParams, budget: &WordBudget, channel: &ChannelModel) -> Result<ThresholdCheck> {
    let g = g_of_r(params.r(), channel, DEFAULT_GRID)?.g_value;
    Ok(classify(budget.rho(params.n()), g, params.n()))
}

pub(crate) fn classify(rho: f64, g: f64, n: u64) -> ThresholdCheck {
    ThresholdCheck {
        verdict: if rho < g { Verdict::Below } else { Verdict::Above },
        rho,
        g_value: g,
        margin: g - rho,
        predicted_log_p: n as f64 * (rho - g),
    }
}

/// Markov/union bound `min(1, Σ_o D[o]·Pr[confuse | u = a − o])` with the
/// exact pairwise probability.
pub fn union_bound(spectrum: &OverlapSpectrum, channel: &ChannelModel) -> f64 {
    let a = spectrum.params().a();
    let total: f64 = spectrum
        .iter()
        .filter(|&(_, d)| d > 0)
        .map(|(o, d)| d as f64 * pairwise_error_exact(a - o, channel))
        .sum();
    total.min(1.0)
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return domain(format!("grid = {grid} is below the minimum of {MIN_GRID}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_comb::overlap_pmf_exact;
    use approx::assert_abs_diff_eq;
    use num_traits::ToPrimitive;
    use std::collections::BTreeMap;

    fn ch(p10: f64, p01: f64) -> ChannelModel {
        ChannelModel::new(p10, p01).unwrap()
    }

    // stationarity of KL(x,p10)+KL(1-x,p01): x/(1-x) = sqrt(p10 q01 / (q10 p01))
    fn closed_form_i(p10: f64, p01: f64) -> (f64, f64) {
        let c = (p10 * (1.0 - p01) / ((1.0 - p10) * p01)).sqrt();
        let x = c / (1.0 + c);
        (kl(x, p10) + kl(1.0 - x, p01), x)
    }

    // 1e-5-step scan along the constraint line
    fn line_search_i(p10: f64, p01: f64) -> (f64, f64) {
        (0..=100_000)
            .map(|k| k as f64 * 1e-5)
            .map(|x| (kl(x, p10) + kl(1.0 - x, p01), x))
            .fold((f64::INFINITY, 0.0), |a, b| if b.0 < a.0 { b } else { a })
    }

    #[test]
    fn symmetric_exponent() {
        let e = pairwise_exponent(&ch(0.1, 0.1), DEFAULT_GRID).unwrap();
        assert_abs_diff_eq!(e.i_value, 2.0 * kl(0.5, 0.1), epsilon = 1e-12);
        assert_abs_diff_eq!(e.i_value, 1.021_651_247_531_981, epsilon = 1e-12);
        assert_abs_diff_eq!(e.x_star, 0.5, epsilon = 1e-8);
        for p in [0.01, 0.07, 0.25, 0.4, 0.5] {
            let e = pairwise_exponent(&ch(p, p), DEFAULT_GRID).unwrap();
            assert_abs_diff_eq!(e.x_star, 0.5, epsilon = 1e-8);
            assert_abs_diff_eq!(e.y_star, 0.5, epsilon = 1e-8);
        }
    }

    #[test]
    fn asymmetric_exponent_matches_line_search() {
        let e = pairwise_exponent(&ch(0.2, 0.05), DEFAULT_GRID).unwrap();
        let (brute, brute_x) = line_search_i(0.2, 0.05);
        assert_abs_diff_eq!(e.i_value, brute, epsilon = 1e-9);
        assert_abs_diff_eq!(e.x_star, brute_x, epsilon = 1e-5);
        let (closed, closed_x) = closed_form_i(0.2, 0.05);
        assert_abs_diff_eq!(e.i_value, closed, epsilon = 1e-12);
        assert_abs_diff_eq!(e.x_star, closed_x, epsilon = 1e-8);
        assert_abs_diff_eq!(e.i_value, 0.905_459_705_428_345, epsilon = 1e-12);
        assert!(e.x_star + e.y_star >= 1.0 - 1e-15);
    }

    #[test]
    fn exponent_domain_errors() {
        assert!(pairwise_exponent(&ch(0.0, 0.1), DEFAULT_GRID).is_err());
        assert!(pairwise_exponent(&ch(0.1, 0.6), DEFAULT_GRID).is_err());
        assert!(pairwise_exponent(&ch(0.1, 0.1), 10).is_err());
        assert!(ChannelModel::new(-0.1, 0.1).is_err());
        assert!(ChannelModel::new(0.1, 1.5).is_err());
    }

    #[test]
    fn exponent_symmetric_and_monotone_on_grid() {
        let ps = [0.01, 0.03, 0.08, 0.15, 0.25, 0.35, 0.5];
        for &a in &ps {
            for &b in &ps {
                let ab = pairwise_exponent(&ch(a, b), 1000).unwrap().i_value;
                let ba = pairwise_exponent(&ch(b, a), 1000).unwrap().i_value;
                assert_abs_diff_eq!(ab, ba, epsilon = 1e-10);
            }
            for w in ps.windows(2) {
                let lo = pairwise_exponent(&ch(w[0], a), 1000).unwrap().i_value;
                let hi = pairwise_exponent(&ch(w[1], a), 1000).unwrap().i_value;
                assert!(hi <= lo + 1e-12);
            }
        }
        // both flip rates at 1/2 carry no information
        assert_abs_diff_eq!(pairwise_exponent(&ch(0.5, 0.5), 1000).unwrap().i_value, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn convergence_table() {
        let rows = exponent_vs_exact(&(1..=64).collect::<Vec<_>>(), &ch(0.1, 0.1), DEFAULT_GRID).unwrap();
        assert_abs_diff_eq!(rows[0].p_exact, 0.19, epsilon = 1e-15);
        // approaches I from above, monotonically
        for w in rows.windows(2) {
            assert!(w[1].normalized < w[0].normalized);
        }
        assert!(rows.iter().all(|r| r.normalized > r.i_value));
        assert!(exponent_vs_exact(&[0, 3], &ch(0.1, 0.1), DEFAULT_GRID).is_err());

        let row = exponent_vs_exact(&[32], &ch(0.2, 0.05), DEFAULT_GRID).unwrap()[0];
        assert!((row.normalized - row.i_value).abs() <= 5.0 * 32f64.ln() / 32.0);
    }

    #[test]
    fn enumerator_examples() {
        for r in [0.1, 0.3, 0.5, 0.8] {
            assert_abs_diff_eq!(expected_log_enumerator(r, r, 0.0).unwrap(), 0.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            expected_log_enumerator(0.5, 1.0, 0.3).unwrap(),
            0.3 - std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        // (1-z)r/(1-r) > 1 is outside the support
        assert!(expected_log_enumerator(0.8, 0.5, 0.0).is_err());
        assert!(expected_log_enumerator(0.0, 0.5, 0.0).is_err());
        assert!(expected_log_enumerator(0.5, 0.5, -1.0).is_err());
    }

    #[test]
    fn enumerator_tracks_exact_hypergeometric() {
        // N = 7, a = 3, |W| = 35: compare per-unit logs of the expected counts
        let p = CodeParams::new(7, 3).unwrap();
        let rho = 35f64.ln() / 7.0;
        for o in 1..=3i64 {
            let exact = (overlap_pmf_exact(p, o).to_f64().unwrap() * 35.0).ln() / 7.0;
            let approx = expected_log_enumerator(3.0 / 7.0, o as f64 / 3.0, rho).unwrap();
            // Stirling residual is O(ln N / N)
            assert!((exact - approx).abs() <= 7f64.ln() / 7.0, "o={o}: {exact} vs {approx}");
        }
        // and the gap closes as N grows at fixed r, z
        let gap = |n: u64| {
            let a = 3 * n / 7;
            let p = CodeParams::new(n, a).unwrap();
            let o = a / 3;
            let exact = crate::exact_comb::ln_ratio(&overlap_pmf_exact(p, o as i64)) / n as f64;
            let approx = expected_log_enumerator(a as f64 / n as f64, o as f64 / a as f64, 0.0).unwrap();
            (exact - approx).abs()
        };
        assert!(gap(210) < gap(21));
        assert!(gap(210) < 0.02);
    }

    #[test]
    fn g_bounds_and_examples() {
        let c = ch(0.1, 0.1);
        let i = pairwise_exponent(&c, DEFAULT_GRID).unwrap().i_value;
        let g = g_of_r(0.5, &c, DEFAULT_GRID).unwrap();
        assert!(g.g_value <= std::f64::consts::LN_2);
        assert!(g.g_value <= 0.25 * i + 1e-12);
        for r in [0.05, 0.2, 0.5, 0.7, 0.95] {
            for c in [ch(0.01, 0.01), ch(0.1, 0.02), ch(0.3, 0.3), ch(0.5, 0.5)] {
                let g = g_of_r(r, &c, 1000).unwrap();
                assert!(g.g_value >= 0.0 && g.g_value <= h(r) + 1e-12, "r={r}");
                assert!(g.z_star >= overlap_domain_lo(r) && g.z_star <= 1.0);
            }
        }
    }

    #[test]
    fn g_matches_entropy_for_near_noiseless_channel() {
        let c = ch(1e-6, 1e-6);
        for k in 1..=9 {
            let r = k as f64 / 10.0;
            let g = g_of_r(r, &c, DEFAULT_GRID).unwrap();
            assert!((g.g_value - h(r)).abs() <= 1e-2, "r={r}: {} vs {}", g.g_value, h(r));
        }
    }

    #[test]
    fn g_matches_fine_grid_oracle() {
        let c = ch(0.05, 0.05);
        let i = pairwise_exponent(&c, DEFAULT_GRID).unwrap().i_value;
        let r: f64 = 0.5;
        let oracle = (0..=200_000)
            .map(|k| k as f64 / 200_000.0)
            .map(|z| h(r) + r * (1.0 - z) * i - r * h(z) - (1.0 - r) * h((1.0 - z) * r / (1.0 - r)))
            .fold(f64::INFINITY, f64::min);
        let g = g_of_r(r, &c, DEFAULT_GRID).unwrap().g_value;
        assert!(g <= oracle + 1e-12);
        assert_abs_diff_eq!(g, oracle, epsilon = 1e-9);
        assert_abs_diff_eq!(g, 0.331_362_388, epsilon = 1e-8);
    }

    #[test]
    fn threshold_verdicts() {
        let c = ch(0.05, 0.05);
        let g = 0.7;
        let half = classify(0.5 * g, g, 100);
        assert_eq!(half.verdict, Verdict::Below);
        assert_abs_diff_eq!(half.margin, 0.5 * g, epsilon = 1e-15);
        assert_eq!(classify(g, g, 100).verdict, Verdict::Above);

        let params = CodeParams::new(200, 100).unwrap();
        let gv = g_of_r(0.5, &c, DEFAULT_GRID).unwrap().g_value;
        let budget = WordBudget::from_rho(0.9 * gv, 200).unwrap();
        let check = threshold_check(params, &budget, &c).unwrap();
        assert_eq!(check.verdict, Verdict::Below);
        assert!(check.predicted_log_p < 0.0);
    }

    #[test]
    fn union_bound_examples() {
        let p = CodeParams::new(10, 4).unwrap();
        assert_eq!(union_bound(&OverlapSpectrum::zero(p), &ch(0.1, 0.1)), 0.0);
        let mut counts = BTreeMap::new();
        counts.insert(3u64, 1u64);
        let s = OverlapSpectrum::new(p, &counts).unwrap();
        assert_abs_diff_eq!(union_bound(&s, &ch(0.1, 0.1)), 0.19, epsilon = 1e-15);
        // a duplicate of the reference is always confused
        counts.insert(4, 1);
        let s = OverlapSpectrum::new(p, &counts).unwrap();
        assert_eq!(union_bound(&s, &ch(0.1, 0.1)), 1.0);
    }
}
