//! Monte Carlo ground truth for random constant-weight codes.
//!
//! Two codebook modes are available:
//!
//! * [`SimMode::Explicit`] samples and stores `M = |W|` words, then decodes
//!   every trial against all of them. Limited to [`MEMORY_GUARD`] words.
//! * [`SimMode::Ensemble`] redraws the competing words for every trial. A
//!   competitor's overlap with the received word is hypergeometric, so the
//!   event "some competitor scores at least as high as the sent word" has
//!   probability `1 − (1 − Q)^{M−1}` and is drawn directly. This is the
//!   random-coding ensemble average and works for any `M`.
//!
//! Trials use counter-based streams ([`rng`]) and are reduced in fixed-size
//! blocks, so reports are bit-identical for any thread count.

mod codeword;
pub mod rng;
pub mod stats;

pub use codeword::{apply_channel, sample_codeword, Codeword};

use std::collections::HashSet;

use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact_comb::{
    binom_exact, overlap_pmf, overlap_upper_tails, pairwise_error_exact, CodeParams, OverlapSpectrum, WordBudget,
};
use crate::exponents::{g_of_r, ChannelModel, DEFAULT_GRID};
use codeword::{overlap, sample_into, words_for};
use rng::{redraw_stream, stream, Domain};
use stats::wilson_interval;

/// Largest explicit codebook, in words.
pub const MEMORY_GUARD: u64 = 1 << 24;

/// Trials per reduction block.
const BLOCK: u64 = 256;

/// `M` constant-weight words stored contiguously.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    params: CodeParams,
    stride: usize,
    data: Vec<u64>,
    seed: u64,
}

impl Codebook {
    /// Samples `m` independent uniform words. Duplicates are kept unless
    /// `distinct` is set, in which case repeated words are redrawn.
    pub fn random(params: CodeParams, m: u64, seed: u64, distinct: bool) -> Result<Self> {
        if m == 0 {
            return invalid("a codebook needs at least one word");
        }
        if m > MEMORY_GUARD {
            return Err(Error::MemoryGuard { words: m.to_string(), limit: MEMORY_GUARD });
        }
        if distinct && binom_exact(params.n(), params.a() as i64) < m.into() {
            return Err(Error::Infeasible(format!("only C({}, {}) distinct words exist, {m} requested", params.n(), params.a())));
        }
        let stride = words_for(params.n() as usize);
        let mut data = vec![0u64; stride * m as usize];
        data.par_chunks_mut(stride).enumerate().for_each_init(Vec::new, |scratch, (i, out)| {
            let mut rng = stream(seed, Domain::Codebook, i as u64);
            sample_into(params, &mut rng, scratch, out);
        });
        if distinct {
            let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(m as usize);
            let mut scratch = Vec::new();
            for (i, out) in data.chunks_mut(stride).enumerate() {
                let mut attempt = 0u32;
                while !seen.insert(out.to_vec()) {
                    attempt += 1;
                    let mut rng = redraw_stream(seed, i as u64, attempt);
                    sample_into(params, &mut rng, &mut scratch, out);
                }
            }
        }
        Ok(Self { params, stride, data, seed })
    }

    /// A codebook from explicit words, all of weight `a` and length `N`.
    pub fn from_words(params: CodeParams, words: &[Codeword]) -> Result<Self> {
        if words.is_empty() {
            return invalid("a codebook needs at least one word");
        }
        let stride = words_for(params.n() as usize);
        let mut data = Vec::with_capacity(stride * words.len());
        for (i, w) in words.iter().enumerate() {
            if w.len() as u64 != params.n() || w.weight() != params.a() {
                return invalid(format!("word {i} is not a length-{} weight-{} word", params.n(), params.a()));
            }
            data.extend_from_slice(w.as_words());
        }
        Ok(Self { params, stride, data, seed: 0 })
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.stride
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn codeword(&self, i: usize) -> Codeword {
        Codeword::from_raw(self.params.n() as usize, self.raw(i))
    }

    fn raw(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn raw_words(&self) -> impl Iterator<Item = &[u64]> {
        self.data.chunks(self.stride)
    }
}

/// Maximum-overlap decoding. Returns the lowest index attaining the largest
/// `⟨w_r, w⟩` and whether two or more words attain it.
pub fn decode(received: &Codeword, book: &Codebook) -> (usize, bool) {
    let mut best = (0usize, 0u64);
    let mut ties = 0usize;
    for (i, w) in book.raw_words().enumerate() {
        let score = overlap(received.as_words(), w);
        if i == 0 || score > best.1 {
            best = (i, score);
            ties = 1;
        } else if score == best.1 {
            ties += 1;
        }
    }
    (best.0, ties > 1)
}

/// Distance enumerator of `book` around word `reference`, excluding the
/// reference itself (so the counts sum to `M − 1`).
pub fn empirical_spectrum(book: &Codebook, reference: usize) -> Result<OverlapSpectrum> {
    if reference >= book.len() {
        return invalid(format!("reference {reference} out of range for {} words", book.len()));
    }
    let r = book.raw(reference);
    let mut spectrum = OverlapSpectrum::zero(book.params);
    for (i, w) in book.raw_words().enumerate() {
        if i != reference {
            spectrum.add(overlap(r, w), 1)?;
        }
    }
    Ok(spectrum)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    #[default]
    Explicit,
    Ensemble,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimOptions {
    pub mode: SimMode,
    /// Reject duplicate codewords (explicit mode only).
    pub distinct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub mode: SimMode,
    pub n: u64,
    pub a: u64,
    pub words: String,
    pub trials: u64,
    pub errors: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Average per-trial Markov bound for the sent word (explicit), or the
    /// expected-spectrum bound (ensemble).
    pub union_bound: f64,
    /// `N(ρ − G(a/N))`; absent when the channel is outside the exponent
    /// domain or `a ∈ {0, N}`.
    pub predicted_log_p: Option<f64>,
    /// Errors caused only by ties with the sent word's score.
    pub tie_errors: u64,
    pub seed: u64,
}

impl SimulationReport {
    pub fn ci_half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

#[derive(Clone, Copy, Default)]
struct Tally {
    errors: u64,
    ties: u64,
    union: f64,
}

/// Simulates `trials` transmissions of uniformly chosen words through the
/// channel and counts decoding errors (ties with a different word count as
/// errors).
pub fn run_monte_carlo(
    params: CodeParams,
    budget: &WordBudget,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
    options: SimOptions,
) -> Result<SimulationReport> {
    if trials == 0 {
        return invalid("at least one trial is required");
    }
    let ptable: Vec<f64> = (0..=params.a()).map(|u| pairwise_error_exact(u, channel)).collect();
    let tally = match options.mode {
        SimMode::Explicit => {
            let m = budget
                .to_u64()
                .filter(|&m| m <= MEMORY_GUARD)
                .ok_or_else(|| Error::MemoryGuard { words: budget.to_string(), limit: MEMORY_GUARD })?;
            let book = Codebook::random(params, m, seed, options.distinct)?;
            run_blocks(trials, |t| explicit_trial(&book, channel, &ptable, seed, t))
        }
        SimMode::Ensemble => {
            if options.distinct {
                return invalid("distinct codebooks need explicit mode");
            }
            let others = budget.count().to_f64().unwrap_or(f64::INFINITY) - 1.0;
            let table = EnsembleTable::new(params, others);
            let mut tally = run_blocks(trials, |t| table.trial(channel, seed, t));
            let expected: f64 = (params.min_overlap()..=params.a())
                .map(|o| overlap_pmf(params, o as i64) * ptable[(params.a() - o) as usize])
                .sum();
            tally.union = if others > 0.0 { (others * expected).min(1.0) } else { 0.0 } * trials as f64;
            tally
        }
    };
    let (ci_low, ci_high) = wilson_interval(tally.errors, trials);
    Ok(SimulationReport {
        mode: options.mode,
        n: params.n(),
        a: params.a(),
        words: budget.to_string(),
        trials,
        errors: tally.errors,
        p_hat: tally.errors as f64 / trials as f64,
        ci_low,
        ci_high,
        union_bound: tally.union / trials as f64,
        predicted_log_p: predicted_log_p(params, budget, channel),
        tie_errors: tally.ties,
        seed,
    })
}

fn predicted_log_p(params: CodeParams, budget: &WordBudget, channel: &ChannelModel) -> Option<f64> {
    if params.a() == 0 || params.a() == params.n() {
        return None;
    }
    let g = g_of_r(params.r(), channel, DEFAULT_GRID).ok()?.g_value;
    Some(params.n() as f64 * (budget.rho(params.n()) - g))
}

fn run_blocks<F>(trials: u64, trial: F) -> Tally
where
    F: Fn(u64) -> (bool, bool, f64) + Sync,
{
    let blocks = trials.div_ceil(BLOCK);
    let partial: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut tally = Tally::default();
            for t in b * BLOCK..((b + 1) * BLOCK).min(trials) {
                let (error, tie_only, union) = trial(t);
                tally.errors += error as u64;
                tally.ties += tie_only as u64;
                tally.union += union;
            }
            tally
        })
        .collect();
    partial.into_iter().fold(Tally::default(), |acc, t| Tally {
        errors: acc.errors + t.errors,
        ties: acc.ties + t.ties,
        union: acc.union + t.union,
    })
}

fn explicit_trial(book: &Codebook, channel: &ChannelModel, ptable: &[f64], seed: u64, t: u64) -> (bool, bool, f64) {
    let mut rng = stream(seed, Domain::Trial, t);
    let sent = rng.random_range(0..book.len());
    let sent_word = book.codeword(sent);
    let received = apply_channel(&sent_word, channel, &mut rng);
    let a = book.params.a();
    let target = overlap(received.as_words(), sent_word.as_words());
    let (mut beaten, mut tied, mut union) = (false, false, 0.0);
    for (i, w) in book.raw_words().enumerate() {
        if i == sent {
            continue;
        }
        let score = overlap(received.as_words(), w);
        beaten |= score > target;
        tied |= score == target;
        union += ptable[(a - overlap(sent_word.as_words(), w)) as usize];
    }
    (beaten || tied, tied && !beaten, union.min(1.0))
}

/// Per-`(weight of w_r, score of w_s)` probabilities that at least one of the
/// `M − 1` competitors reaches (`≥`) or beats (`>`) the sent word.
struct EnsembleTable {
    params: CodeParams,
    // any_reach[k][t] = 1 − (1 − Pr[overlap ≥ t])^{M−1}
    any_reach: Vec<Vec<f64>>,
}

impl EnsembleTable {
    fn new(params: CodeParams, others: f64) -> Self {
        let any = |q: f64| {
            if q <= 0.0 || others <= 0.0 {
                0.0
            } else if q >= 1.0 {
                1.0
            } else {
                -(others * (-q).ln_1p()).exp_m1()
            }
        };
        let any_reach = (0..=params.n())
            .into_par_iter()
            .map(|k| overlap_upper_tails(params.n(), k, params.a()).into_iter().map(any).collect())
            .collect();
        Self { params, any_reach }
    }

    fn trial(&self, channel: &ChannelModel, seed: u64, t: u64) -> (bool, bool, f64) {
        let mut rng = stream(seed, Domain::Trial, t);
        let sent = sample_codeword(self.params, &mut rng);
        let received = apply_channel(&sent, channel, &mut rng);
        let score = received.overlap(&sent) as usize;
        let row = &self.any_reach[received.weight() as usize];
        let u: f64 = rng.random();
        let error = u < row[score];
        let beaten = u < row[score + 1];
        (error, error && !beaten, 0.0)
    }
}

/// One row of a threshold sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub rho: f64,
    pub words: String,
    pub trials: u64,
    /// `None` when the row was skipped by the memory guard.
    pub report: Option<SimulationReport>,
}

impl SweepRow {
    pub fn skipped(&self) -> bool {
        self.report.is_none()
    }
}

/// Runs [`run_monte_carlo`] at `|W| = ⌈exp(ratio·G·N)⌉` for each ratio
/// `ρ/G`. All rows share `seed`. Explicit-mode rows whose budget exceeds
/// the memory guard are skipped, not failed.
pub fn threshold_sweep(
    params: CodeParams,
    channel: &ChannelModel,
    ratios: &[f64],
    trials: u64,
    seed: u64,
    options: SimOptions,
) -> Result<Vec<SweepRow>> {
    if let Some(r) = ratios.iter().find(|&&r| !(r > 0.0 && r <= 2.0)) {
        return invalid(format!("rho/G ratio {r} is outside (0, 2]"));
    }
    let g = g_of_r(params.r(), channel, DEFAULT_GRID)?.g_value;
    ratios
        .iter()
        .map(|&ratio| {
            let budget = WordBudget::from_rho(ratio * g, params.n())?;
            let report = match run_monte_carlo(params, &budget, channel, trials, seed, options) {
                Ok(report) => Some(report),
                Err(Error::MemoryGuard { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(SweepRow { ratio, rho: budget.rho(params.n()), words: budget.to_string(), trials, report })
        })
        .collect()
}
