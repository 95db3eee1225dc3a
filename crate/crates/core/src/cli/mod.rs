//! Command-line front end.
//!
//! Every subcommand produces a [`Table`] written as CSV or JSON. The resolved
//! arguments are embedded in the output, and `rerun --from FILE` replays them
//! to regenerate the file byte for byte.

pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::Pow;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::designer::{constraint_curve, constraint_curve_at, design_noiseless_with, design_noisy_with, CurveMode};
use crate::designer::{Cost, DesignOptions, DesignSolution};
use crate::error::Error;
use crate::exact_comb::{brute_force_design, CodeParams, WordBudget};
use crate::exponents::{exponent_report, exponent_vs_exact, threshold_check, ChannelModel, DEFAULT_GRID};
use crate::simulator::{run_monte_carlo, threshold_sweep, SimMode, SimOptions};
use output::{read_config, Cell, Format, Table};

pub const DEFAULT_SEED: u64 = 0x00c0_ffee;

pub const DESIGN_COLUMNS: &[&str] = &["mode", "r_star", "n_continuous", "a", "n", "cost", "constraint"];
pub const SIMULATE_COLUMNS: &[&str] = &[
    "mode", "n", "a", "words", "trials", "errors", "tie_errors", "p_hat", "ci_low", "ci_high", "union_bound",
    "predicted_log_p", "seed",
];
pub const SWEEP_COLUMNS: &[&str] = &[
    "ratio", "rho", "words", "trials", "errors", "p_hat", "ci_low", "ci_high", "union_bound", "predicted_log_p",
    "skipped",
];
pub const CURVE_COLUMNS: &[&str] = &["r", "n_required", "cost"];
pub const EXPONENT_COLUMNS: &[&str] = &["p10", "p01", "i_value", "x_star", "y_star", "r", "g_value", "z_star", "entropy"];
pub const CONVERGENCE_COLUMNS: &[&str] = &["u", "p_exact", "ln_p", "normalized", "i_value", "gap"];

#[derive(Parser, Debug)]
#[command(name = "cwcode", version, about = "Design and simulate constant-weight codes")]
pub struct Cli {
    /// Worker threads; defaults to all cores
    #[arg(long, global = true, env = "CWCODE_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Cheapest (a, N) able to carry a word budget
    Design(DesignArgs),
    /// Pairwise and random-code exponents of a channel
    Exponent(ExponentArgs),
    /// Monte Carlo decoding error of a random code
    Simulate(SimulateArgs),
    /// Monte Carlo error across rates around the threshold
    Sweep(SweepArgs),
    /// Feasibility frontier N(r)
    Curve(CurveArgs),
    /// Exhaustive design search over small N
    Brute(BruteArgs),
    /// Exact pairwise error against its exponent
    Convergence(ConvergenceArgs),
    /// Regenerate an output file from its embedded configuration
    #[serde(skip)]
    Rerun(RerunArgs),
}

#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Write the table here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelArgs {
    /// P(1 -> 0)
    #[arg(long)]
    pub p10: Option<f64>,
    /// P(0 -> 1); defaults to --p10
    #[arg(long)]
    pub p01: Option<f64>,
}

impl ChannelArgs {
    fn resolve(&self) -> Result<Option<ChannelModel>, CliError> {
        match (self.p10, self.p01) {
            (None, None) => Ok(None),
            (None, Some(_)) => Err(CliError::Usage("--p01 needs --p10".into())),
            (Some(p10), p01) => Ok(Some(ChannelModel::new(p10, p01.unwrap_or(p10))?)),
        }
    }

    fn required(&self) -> Result<ChannelModel, CliError> {
        self.resolve()?.ok_or_else(|| CliError::Usage("--p10 is required".into()))
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostArgs {
    #[arg(long, default_value_t = 1.0)]
    pub cost_a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub cost_n: f64,
}

impl CostArgs {
    fn cost(&self) -> Result<Cost, CliError> {
        Ok(Cost::linear(self.cost_a, self.cost_n)?)
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignArgs {
    /// Number of words, as an integer or `b^k`
    #[arg(long)]
    pub words: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Noisy mode requires safety·ρ < G(a/N)
    #[arg(long, default_value_t = 1.0)]
    pub safety: f64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Activity ratios at which to evaluate G (comma separated)
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub a: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Sample the random-code ensemble instead of one explicit codebook
    #[arg(long)]
    pub ensemble: bool,
}

impl SimArgs {
    fn params(&self) -> Result<CodeParams, CliError> {
        Ok(CodeParams::new(self.n, self.a)?)
    }

    fn options(&self, distinct: bool) -> SimOptions {
        let mode = if self.ensemble { SimMode::Ensemble } else { SimMode::Explicit };
        SimOptions { mode, distinct }
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sim: SimArgs,
    #[arg(long)]
    pub words: String,
    /// Redraw duplicate codewords
    #[arg(long)]
    pub distinct: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub sim: SimArgs,
    /// Rates as multiples of G(a/N) (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1.0,1.2")]
    pub rho_ratios: Vec<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveArgs {
    #[arg(long)]
    pub words: String,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Explicit ratios; overrides --samples
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteArgs {
    #[arg(long)]
    pub words: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub cost: CostArgs,
    #[arg(long, default_value_t = 64)]
    pub n_max: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Word weights u (comma separated)
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128,256")]
    pub u: Vec<u64>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RerunArgs {
    /// A CSV or JSON file written by this tool
    #[arg(long)]
    pub from: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Infeasible(_) | Error::MemoryGuard { .. }) => 2,
            _ => 1,
        }
    }
}

/// A finished command: its table, a human summary and the exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    pub code: i32,
}

/// Parses a word count: a decimal integer or `b^k`.
pub fn parse_words(s: &str) -> Result<WordBudget, CliError> {
    let bad = || CliError::Usage(format!("--words: cannot parse '{s}' as a count"));
    let count = match s.split_once('^') {
        Some((b, k)) => {
            let base = BigUint::from_str(b.trim()).map_err(|_| bad())?;
            let exp: u32 = k.trim().parse().map_err(|_| bad())?;
            base.pow(exp)
        }
        None => BigUint::from_str(s.trim()).map_err(|_| bad())?,
    };
    Ok(WordBudget::new(count)?)
}

fn design_row(s: &DesignSolution) -> Vec<Cell> {
    let (a, n) = if s.feasible { (Cell::Int(s.a_int), Cell::Int(s.n_int)) } else { (Cell::Null, Cell::Null) };
    vec![
        Cell::text(s.mode.to_string()),
        s.r_star.into(),
        s.n_continuous.into(),
        a,
        n,
        s.cost.into(),
        s.constraint_value.into(),
    ]
}

fn design_summary(s: &DesignSolution) -> String {
    if s.feasible {
        format!(
            "{} design: N={} a={} cost={} (continuous r*={:.6} N*={:.6})",
            s.mode, s.n_int, s.a_int, s.cost, s.r_star, s.n_continuous
        )
    } else {
        format!(
            "{} design: no integer point in the repair window (continuous r*={:.6} N*={:.6})",
            s.mode, s.r_star, s.n_continuous
        )
    }
}

/// Runs a parsed command (anything but `rerun`).
pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Design(args) => {
            let budget = parse_words(&args.words)?;
            let cost = args.cost.cost()?;
            let options = DesignOptions { grid: args.grid, safety_factor: args.safety, ..Default::default() };
            let mut summary = Vec::new();
            let solution = match args.channel.resolve()? {
                None => design_noiseless_with(&budget, &cost, &options)?,
                Some(channel) => {
                    let s = design_noisy_with(&budget, &cost, &channel, &options)?;
                    if s.feasible {
                        let check = threshold_check(CodeParams::new(s.n_int, s.a_int)?, &budget, &channel)?;
                        summary.push(format!(
                            "rho={:.6} G(a/N)={:.6} verdict={:?}",
                            check.rho, check.g_value, check.verdict
                        ));
                    }
                    s
                }
            };
            summary.insert(0, design_summary(&solution));
            let mut table = Table::new(DESIGN_COLUMNS);
            table.push(design_row(&solution));
            Ok(Outcome { table, summary, code: if solution.feasible { 0 } else { 2 } })
        }
        Command::Brute(args) => {
            let budget = parse_words(&args.words)?;
            let solution = brute_force_design(&budget, &args.cost.cost()?, args.n_max)?;
            let mut table = Table::new(DESIGN_COLUMNS);
            table.push(design_row(&solution));
            Ok(Outcome { table, summary: vec![design_summary(&solution)], code: 0 })
        }
        Command::Exponent(args) => {
            let channel = args.channel.required()?;
            let rs: Vec<Option<f64>> = if args.r.is_empty() { vec![None] } else { args.r.iter().copied().map(Some).collect() };
            let mut table = Table::new(EXPONENT_COLUMNS);
            let mut summary = Vec::new();
            for r in rs {
                let rep = exponent_report(&channel, r, args.grid)?;
                summary.push(match (rep.r, rep.g_value) {
                    (Some(r), Some(g)) => format!("I={:.9} G({r})={:.9}", rep.i_value, g),
                    _ => format!("I={:.9} at x*={:.6}", rep.i_value, rep.x_star),
                });
                table.push(vec![
                    channel.p10().into(),
                    channel.p01().into(),
                    rep.i_value.into(),
                    rep.x_star.into(),
                    rep.y_star.into(),
                    rep.r.into(),
                    rep.g_value.into(),
                    rep.z_star.into(),
                    rep.entropy.into(),
                ]);
            }
            Ok(Outcome { table, summary, code: 0 })
        }
        Command::Simulate(args) => {
            let budget = parse_words(&args.words)?;
            let channel = args.sim.channel.resolve()?.unwrap_or_else(ChannelModel::noiseless);
            let rep = run_monte_carlo(
                args.sim.params()?,
                &budget,
                &channel,
                args.sim.trials,
                args.sim.seed,
                args.sim.options(args.distinct),
            )?;
            let summary = vec![format!(
                "p_hat={} [{}, {}] over {} trials, union bound {}",
                output::fmt_sig(rep.p_hat),
                output::fmt_sig(rep.ci_low),
                output::fmt_sig(rep.ci_high),
                rep.trials,
                output::fmt_sig(rep.union_bound)
            )];
            let mut table = Table::new(SIMULATE_COLUMNS);
            table.push(vec![
                Cell::text(format!("{:?}", rep.mode).to_lowercase()),
                rep.n.into(),
                rep.a.into(),
                Cell::count(&rep.words),
                rep.trials.into(),
                rep.errors.into(),
                rep.tie_errors.into(),
                rep.p_hat.into(),
                rep.ci_low.into(),
                rep.ci_high.into(),
                rep.union_bound.into(),
                rep.predicted_log_p.into(),
                rep.seed.into(),
            ]);
            Ok(Outcome { table, summary, code: 0 })
        }
        Command::Sweep(args) => {
            let channel = args.sim.channel.required()?;
            let rows = threshold_sweep(
                args.sim.params()?,
                &channel,
                &args.rho_ratios,
                args.sim.trials,
                args.sim.seed,
                args.sim.options(false),
            )?;
            let mut table = Table::new(SWEEP_COLUMNS);
            let mut summary = Vec::new();
            for row in &rows {
                let mut cells = vec![row.ratio.into(), row.rho.into(), Cell::count(&row.words), row.trials.into()];
                match &row.report {
                    Some(rep) => {
                        summary.push(format!(
                            "rho/G={}: p_hat={} [{}, {}]",
                            row.ratio,
                            output::fmt_sig(rep.p_hat),
                            output::fmt_sig(rep.ci_low),
                            output::fmt_sig(rep.ci_high)
                        ));
                        cells.extend([
                            rep.errors.into(),
                            rep.p_hat.into(),
                            rep.ci_low.into(),
                            rep.ci_high.into(),
                            rep.union_bound.into(),
                            rep.predicted_log_p.into(),
                            false.into(),
                        ]);
                    }
                    None => {
                        summary.push(format!("rho/G={}: skipped ({} words exceed the memory guard)", row.ratio, row.words));
                        cells.extend([Cell::Null, Cell::Null, Cell::Null, Cell::Null, Cell::Null, Cell::Null, true.into()]);
                    }
                }
                table.push(cells);
            }
            let code = if !rows.is_empty() && rows.iter().all(|r| r.skipped()) { 2 } else { 0 };
            Ok(Outcome { table, summary, code })
        }
        Command::Curve(args) => {
            let budget = parse_words(&args.words)?;
            let cost = args.cost.cost()?;
            let mode = args.channel.resolve()?.map_or(CurveMode::Noiseless, CurveMode::Noisy);
            let points = if args.r.is_empty() {
                constraint_curve(&budget, mode, &cost, args.samples)?
            } else {
                constraint_curve_at(&budget, mode, &cost, &args.r)?
            };
            let mut table = Table::new(CURVE_COLUMNS);
            for p in &points {
                table.push(vec![p.r.into(), p.n_required.into(), p.cost.into()]);
            }
            Ok(Outcome { table, summary: vec![format!("{} curve points", points.len())], code: 0 })
        }
        Command::Convergence(args) => {
            let channel = args.channel.required()?;
            let rows = exponent_vs_exact(&args.u, &channel, args.grid)?;
            let mut table = Table::new(CONVERGENCE_COLUMNS);
            for r in &rows {
                table.push(vec![
                    r.u.into(),
                    r.p_exact.into(),
                    r.ln_p.into(),
                    r.normalized.into(),
                    r.i_value.into(),
                    (r.normalized - r.i_value).into(),
                ]);
            }
            let summary = rows.last().map(|r| format!("u={}: -ln P/u={:.9} I={:.9}", r.u, r.normalized, r.i_value));
            Ok(Outcome { table, summary: summary.into_iter().collect(), code: 0 })
        }
        Command::Rerun(_) => Err(CliError::Usage("rerun cannot be nested".into())),
    }
}

impl Command {
    fn output(&self) -> Option<&OutputArgs> {
        match self {
            Command::Design(a) => Some(&a.output),
            Command::Exponent(a) => Some(&a.output),
            Command::Simulate(a) => Some(&a.output),
            Command::Sweep(a) => Some(&a.output),
            Command::Curve(a) => Some(&a.output),
            Command::Brute(a) => Some(&a.output),
            Command::Convergence(a) => Some(&a.output),
            Command::Rerun(_) => None,
        }
    }

    fn output_mut(&mut self) -> Option<&mut OutputArgs> {
        match self {
            Command::Design(a) => Some(&mut a.output),
            Command::Exponent(a) => Some(&mut a.output),
            Command::Simulate(a) => Some(&mut a.output),
            Command::Sweep(a) => Some(&mut a.output),
            Command::Curve(a) => Some(&mut a.output),
            Command::Brute(a) => Some(&mut a.output),
            Command::Convergence(a) => Some(&mut a.output),
            Command::Rerun(_) => None,
        }
    }

    /// The configuration embedded in output files.
    pub fn config(&self) -> Value {
        serde_json::to_value(self).expect("commands serialise")
    }
}

/// Replaces a `rerun` with the command recorded in its source file.
fn resolve_rerun(command: Command) -> Result<Command, CliError> {
    let Command::Rerun(args) = command else { return Ok(command) };
    let contents = fs::read_to_string(&args.from)?;
    let (config, format) = read_config(&contents)
        .ok_or_else(|| CliError::Usage(format!("{}: no embedded configuration", args.from.display())))?;
    let mut replay: Command = serde_json::from_value(config)
        .map_err(|e| CliError::Usage(format!("{}: bad configuration: {e}", args.from.display())))?;
    if let Some(out) = replay.output_mut() {
        *out = OutputArgs { out: args.out, format };
    }
    Ok(replay)
}

fn run_command(command: Command) -> Result<i32, CliError> {
    let command = resolve_rerun(command)?;
    let outcome = execute(&command)?;
    let output = command.output().cloned().unwrap_or_default();
    let rendered = outcome.table.render(output.format, &command.config());
    match &output.out {
        Some(path) => {
            fs::write(path, rendered)?;
            for line in &outcome.summary {
                println!("{line}");
            }
        }
        None => {
            print!("{rendered}");
            for line in &outcome.summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(outcome.code)
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_command(cli.command)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => run_command(cli.command),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
