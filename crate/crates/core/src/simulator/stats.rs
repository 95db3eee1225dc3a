//! Interval estimates and goodness-of-fit tests for simulation output.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95%. With zero errors the upper end is the
/// rule-of-three bound `3/trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    assert!(trials > 0 && errors <= trials);
    if errors == 0 {
        return (0.0, (3.0 / trials as f64).min(1.0));
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson goodness-of-fit of `observed` counts against cell probabilities.
///
/// Adjacent cells are pooled left to right until each pooled cell expects at
/// least `min_expected` counts; a short remainder joins the last pool.
pub fn chi_square_gof(observed: &[u64], probs: &[f64], min_expected: f64) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return invalid("observed and expected cell counts differ in length");
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return invalid("no observations");
    }
    let n = total as f64;
    let mut pools: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        obs += o as f64;
        exp += p * n;
        if exp >= min_expected {
            pools.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match pools.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => pools.push((obs, exp)),
        }
    }
    if pools.len() < 2 {
        return invalid("too few pooled cells for a chi-square test");
    }
    let statistic = pools
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else if o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum::<f64>();
    let dof = pools.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    Ok(ChiSquare { statistic, dof, p_value: dist.sf(statistic) })
}
