//! Cost-minimal code design.
//!
//! Both solvers work in two stages. The continuous stage replaces
//! `ln C(N, rN)` by `N·H(r)` (or `N·G(r)` for a noisy channel), which turns
//! the constraint into `N ≥ ln|W| / H(r)` and leaves a one-dimensional search
//! over `r`. The integer stage scans a window of `N` around the continuous
//! optimum and keeps the cheapest pair that passes the *exact* constraint.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::h;
use crate::error::{invalid, Error, Result};
use crate::exact_comb::WordBudget;
use crate::exponents::{g_with_i, pairwise_exponent, ChannelModel, DEFAULT_GRID};
use crate::optimize::{grid_then_golden, logspace};

/// A cost `C(a, N)` that never decreases when `a` or `N` grows.
pub trait CostModel: Send + Sync {
    fn evaluate(&self, a: f64, n: f64) -> f64;
}

/// `c_a·a + c_n·N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearCost {
    pub c_a: f64,
    pub c_n: f64,
}

impl CostModel for LinearCost {
    fn evaluate(&self, a: f64, n: f64) -> f64 {
        self.c_a * a + self.c_n * n
    }
}

impl<F> CostModel for F
where
    F: Fn(f64, f64) -> f64 + Send + Sync,
{
    fn evaluate(&self, a: f64, n: f64) -> f64 {
        self(a, n)
    }
}

/// A registered cost model. Registration spot-checks monotonicity on random
/// pairs and rejects models that fail.
#[derive(Clone)]
pub struct Cost {
    model: Arc<dyn CostModel>,
    label: String,
}

impl Cost {
    const SPOT_CHECKS: usize = 512;
    const SPOT_RANGE: f64 = 4096.0;

    pub fn register(model: impl CostModel + 'static, label: impl Into<String>) -> Result<Self> {
        let model: Arc<dyn CostModel> = Arc::new(model);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f_6e6f_746f_6e65);
        for _ in 0..Self::SPOT_CHECKS {
            let a = rng.random::<f64>() * Self::SPOT_RANGE;
            let n = rng.random::<f64>() * Self::SPOT_RANGE;
            let a2 = a + rng.random::<f64>() * Self::SPOT_RANGE;
            let n2 = n + rng.random::<f64>() * Self::SPOT_RANGE;
            let (lo, hi) = (model.evaluate(a, n), model.evaluate(a2, n2));
            if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 {
                return Err(Error::NonMonotoneCost(format!(
                    "C({a:.3}, {n:.3}) = {lo} is not a finite nonnegative cost"
                )));
            }
            if lo > hi + 1e-12 * lo.abs().max(1.0) {
                return Err(Error::NonMonotoneCost(format!(
                    "C({a:.3}, {n:.3}) = {lo} > C({a2:.3}, {n2:.3}) = {hi}"
                )));
            }
        }
        Ok(Self { model, label: label.into() })
    }

    /// The built-in `c_a·a + c_n·N`; coefficients must be nonnegative and not
    /// both zero.
    pub fn linear(c_a: f64, c_n: f64) -> Result<Self> {
        if !(c_a >= 0.0 && c_n >= 0.0) || c_a + c_n == 0.0 || !(c_a + c_n).is_finite() {
            return invalid(format!("linear cost needs nonnegative coefficients, got ({c_a}, {c_n})"));
        }
        Self::register(LinearCost { c_a, c_n }, format!("linear({c_a}, {c_n})"))
    }

    pub fn evaluate(&self, a: f64, n: f64) -> f64 {
        self.model.evaluate(a, n)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cost").field("label", &self.label).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignMode {
    Noiseless,
    Noisy,
}

impl fmt::Display for DesignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DesignMode::Noiseless => "noiseless",
            DesignMode::Noisy => "noisy",
        })
    }
}

/// Continuous optimum plus its exact integer repair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    pub mode: DesignMode,
    pub r_star: f64,
    pub n_continuous: f64,
    pub a_int: u64,
    pub n_int: u64,
    pub cost: f64,
    /// `H(r*)` or `G(r*)`.
    pub constraint_value: f64,
    /// False when the integer repair window held no feasible pair; the
    /// integer fields are then zero and `cost` is `inf`.
    pub feasible: bool,
}

/// Tunables shared by both solvers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignOptions {
    /// Grid for `I` and `G` (noisy mode only).
    pub grid: usize,
    /// Multiplies the required `N` in noisy mode: the integer point must
    /// satisfy `safety·ρ < G(a/N)`.
    pub safety_factor: f64,
    /// Upper end of the repair window is `c_repair·⌈N*⌉`; doubled once
    /// before giving up.
    pub c_repair: u64,
}

impl Default for DesignOptions {
    fn default() -> Self {
        Self { grid: DEFAULT_GRID, safety_factor: 1.0, c_repair: 2 }
    }
}

const R_GRID_POINTS: usize = 1024;
const R_MIN: f64 = 1e-4;
const R_REFINE_CELLS: usize = 3;
const R_TOL: f64 = 1e-9;
/// `G` below this is treated as zero.
const G_FLOOR: f64 = 1e-10;
/// Longest code the integer repair will scan.
pub const MAX_REPAIR_N: u64 = 1 << 20;

fn r_grid() -> Vec<f64> {
    logspace(R_MIN, 1.0 - R_MIN, R_GRID_POINTS)
}

/// `φ(r) = C(r·L/H(r), L/H(r))` with `L = ln|W|`.
pub fn noiseless_objective(budget: &WordBudget, cost: &Cost, r: f64) -> f64 {
    let n = budget.ln_count() / h(r);
    cost.evaluate(r * n, n)
}

/// Cheapest `(a, N)` with `C(N, a) ≥ |W|` (exact), found by minimising the
/// entropy relaxation and repairing it on the integer lattice.
pub fn design_noiseless(budget: &WordBudget, cost: &Cost) -> Result<DesignSolution> {
    design_noiseless_with(budget, cost, &DesignOptions::default())
}

pub fn design_noiseless_with(budget: &WordBudget, cost: &Cost, options: &DesignOptions) -> Result<DesignSolution> {
    check_budget(budget)?;
    let l = budget.ln_count();
    let phi = |r: f64| noiseless_objective(budget, cost, r);
    let (r_star, _) = grid_then_golden(&phi, &r_grid(), R_REFINE_CELLS, R_TOL);
    let hr = h(r_star);
    let n_star = l / hr;

    let scan = |n: u64| cheapest_exact(budget, n).map(|a| (a, n));
    let repaired = repair(n_star, options.c_repair, budget, cost, scan)?;
    Ok(finish(DesignMode::Noiseless, r_star, n_star, hr, repaired, cost))
}

/// As [`design_noiseless`] but under the error-free-transmission constraint
/// `ρ < G(r)` for the given channel. The integer point must satisfy both
/// `C(N, a) ≥ |W|` and `safety·ln|W|/N < G(a/N)`.
pub fn design_noisy(budget: &WordBudget, cost: &Cost, channel: &ChannelModel) -> Result<DesignSolution> {
    design_noisy_with(budget, cost, channel, &DesignOptions::default())
}

pub fn design_noisy_with(
    budget: &WordBudget,
    cost: &Cost,
    channel: &ChannelModel,
    options: &DesignOptions,
) -> Result<DesignSolution> {
    check_budget(budget)?;
    if !(options.safety_factor >= 1.0) || !options.safety_factor.is_finite() {
        return invalid(format!("safety factor {} must be >= 1", options.safety_factor));
    }
    let i_value = pairwise_exponent(channel, options.grid)?.i_value;
    let grid = options.grid;
    let g = |r: f64| match g_with_i(r, i_value, grid) {
        Ok(g) if g.g_value > G_FLOOR => g.g_value,
        _ => 0.0,
    };
    let l = budget.ln_count() * options.safety_factor;
    let phi = |r: f64| {
        let gr = g(r);
        if gr <= 0.0 {
            return f64::INFINITY;
        }
        let n = l / gr;
        cost.evaluate(r * n, n)
    };
    let (r_star, value) = grid_then_golden(&phi, &r_grid(), R_REFINE_CELLS, R_TOL);
    if !value.is_finite() {
        return Err(Error::Infeasible(format!(
            "G(r) vanishes for every r: channel ({}, {}) too noisy",
            channel.p10(),
            channel.p01()
        )));
    }
    let gr = g(r_star);
    let n_star = l / gr;

    let ln_w = budget.ln_count();
    let safety = options.safety_factor;
    let scan = |n: u64| {
        let a_lo = cheapest_exact(budget, n)?;
        let rate = safety * ln_w / n as f64;
        (a_lo.max(1)..=(n - a_lo).min(n - 1)).find(|&a| rate < g(a as f64 / n as f64)).map(|a| (a, n))
    };
    let repaired = repair(n_star, options.c_repair, budget, cost, scan)?;
    Ok(finish(DesignMode::Noisy, r_star, n_star, gr, repaired, cost))
}

fn check_budget(budget: &WordBudget) -> Result<()> {
    if *budget.count() < BigUint::from(2u32) {
        return invalid("design needs a budget of at least 2 words");
    }
    Ok(())
}

/// Smallest `a` with `C(n, a) ≥ |W|`, if any. Feasible `a` form the
/// symmetric interval `[a_lo, n − a_lo]`.
fn cheapest_exact(budget: &WordBudget, n: u64) -> Option<u64> {
    let mut c = BigUint::one();
    for a in 0..=n / 2 {
        if c >= *budget.count() {
            return Some(a);
        }
        c = c * (n - a) / (a + 1);
    }
    None
}

/// Smallest `N` for which any weight reaches `|W|` words.
fn min_feasible_n(budget: &WordBudget) -> u64 {
    let mut n = 1;
    while cheapest_exact(budget, n).is_none() {
        n += 1;
    }
    n
}

/// Scans `N` over `[min(⌊N*⌋, N_min), c·⌈N*⌉]`, doubling `c` once if
/// nothing passes. `scan(n)` returns the cheapest feasible `(a, n)` at that
/// length (smallest feasible `a`, since cost is monotone in `a`).
fn repair<S>(n_star: f64, c_repair: u64, budget: &WordBudget, cost: &Cost, scan: S) -> Result<Option<(u64, u64)>>
where
    S: Fn(u64) -> Option<(u64, u64)> + Sync,
{
    if !(n_star <= MAX_REPAIR_N as f64) {
        return Err(Error::Infeasible(format!("required length {n_star:.3e} exceeds {MAX_REPAIR_N}")));
    }
    let lo = (n_star.floor() as u64).max(1).min(min_feasible_n(budget));
    let ceil = n_star.ceil().max(1.0) as u64;
    for factor in [c_repair, 2 * c_repair] {
        let hi = factor.saturating_mul(ceil).max(lo);
        let candidates: Vec<(u64, u64)> = (lo..=hi).into_par_iter().filter_map(&scan).collect();
        // candidates arrive in ascending N: strict < keeps the smallest N on ties
        let best = candidates.into_iter().fold(None, |best: Option<((u64, u64), f64)>, (a, n)| {
            let value = cost.evaluate(a as f64, n as f64);
            match best {
                Some((_, b)) if b <= value => best,
                _ => Some(((a, n), value)),
            }
        });
        if let Some((pair, _)) = best {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

fn finish(
    mode: DesignMode,
    r_star: f64,
    n_star: f64,
    constraint_value: f64,
    repaired: Option<(u64, u64)>,
    cost: &Cost,
) -> DesignSolution {
    match repaired {
        Some((a, n)) => DesignSolution {
            mode,
            r_star,
            n_continuous: n_star,
            a_int: a,
            n_int: n,
            cost: cost.evaluate(a as f64, n as f64),
            constraint_value,
            feasible: true,
        },
        None => DesignSolution {
            mode,
            r_star,
            n_continuous: n_star,
            a_int: 0,
            n_int: 0,
            cost: f64::INFINITY,
            constraint_value,
            feasible: false,
        },
    }
}

/// Which constraint boundary a curve traces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CurveMode {
    Noiseless,
    Noisy(ChannelModel),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r: f64,
    pub n_required: f64,
    pub cost: f64,
}

/// The feasibility frontier `N = L/H(r)` (or `L/G(r)`) at `samples` evenly
/// spaced ratios `r = i/(samples−1)`, endpoints included.
pub fn constraint_curve(budget: &WordBudget, mode: CurveMode, cost: &Cost, samples: usize) -> Result<Vec<CurvePoint>> {
    if samples < 2 {
        return invalid("a curve needs at least 2 samples");
    }
    let rs: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    constraint_curve_at(budget, mode, cost, &rs)
}

/// The frontier at explicit ratios in `(0, 1)`. Endpoints give `inf`.
pub fn constraint_curve_at(budget: &WordBudget, mode: CurveMode, cost: &Cost, rs: &[f64]) -> Result<Vec<CurvePoint>> {
    let l = budget.ln_count();
    let i_value = match mode {
        CurveMode::Noiseless => None,
        CurveMode::Noisy(channel) => Some(pairwise_exponent(&channel, DEFAULT_GRID)?.i_value),
    };
    rs.par_iter()
        .map(|&r| {
            if !(0.0..=1.0).contains(&r) {
                return invalid(format!("r = {r} is outside [0, 1]"));
            }
            let rate = match i_value {
                _ if r == 0.0 || r == 1.0 => 0.0,
                None => h(r),
                Some(i) => g_with_i(r, i, DEFAULT_GRID)?.g_value,
            };
            let n_required = if rate > 0.0 { l / rate } else { f64::INFINITY };
            let c = if n_required.is_finite() { cost.evaluate(r * n_required, n_required) } else { f64::INFINITY };
            Ok(CurvePoint { r, n_required, cost: c })
        })
        .collect()
}
