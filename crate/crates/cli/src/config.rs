use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use cdg_core::exact::DEFAULT_MAX_MODULUS;
use cdg_core::process::{IncrementDistribution, ProcessParams};
use cdg_core::stats::Conditioning;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Command line of the `cdg` binary.
#[derive(Debug, Parser)]
#[command(
    name = "cdg",
    version,
    about = "Exact and sampled analysis of X(n+1) = a X(n) + b(n) mod p"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write data here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the exact distribution and print one trace row per step.
    Evolve(EvolveArgs),
    /// First steps at which the distance to uniform drops below fixed thresholds.
    Scan(ScanArgs),
    /// Canonical form, class, value and blocks of a digit string.
    Canon(CanonArgs),
    /// Adjacent-pair cell frequencies and related sampling statistics.
    Stats(StatsArgs),
    /// Bound constants and counting exponents.
    Bounds(BoundsArgs),
    /// Monte Carlo endpoint histogram and plug-in distance estimate.
    Simulate(SimulateArgs),
}

/// Process parameters shared by several subcommands.
#[derive(Debug, Clone, Args)]
pub struct ProcessArgs {
    /// Odd modulus.
    #[arg(long = "p", value_name = "P")]
    pub modulus: u64,
    /// Multiplier `a`, invertible mod p.
    #[arg(long, default_value_t = ProcessParams::DEFAULT_MULTIPLIER, allow_negative_numbers = true)]
    pub multiplier: i64,
    /// Increment probabilities `q-1,q0,q1`.
    #[arg(long, value_name = "Q-1,Q0,Q1", value_parser = parse_dist)]
    pub dist: Option<IncrementDistribution>,
}

impl ProcessArgs {
    pub fn params(&self) -> Result<ProcessParams> {
        let dist = self.dist.unwrap_or(IncrementDistribution::UNIFORM);
        Ok(ProcessParams::new(self.modulus, self.multiplier, dist)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    /// Number of steps; rows are emitted for steps 0..=N.
    #[arg(long, value_name = "N")]
    pub steps: usize,
    /// Extra typical-set column at this mass deficit.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Raise the dense-vector modulus limit.
    #[arg(long, value_name = "P")]
    pub max_p_override: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// Moduli to scan, comma separated.
    #[arg(long = "p", value_name = "P,...", value_delimiter = ',')]
    pub moduli: Vec<u64>,
    /// Inclusive range `LO:HI`; every prime (or odd number) inside is scanned.
    #[arg(long, value_name = "LO:HI", value_parser = parse_range)]
    pub range: Option<(u64, u64)>,
    /// Step budget per modulus; defaults to a multiple of log2 p.
    #[arg(long, value_name = "N")]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = ProcessParams::DEFAULT_MULTIPLIER, allow_negative_numbers = true)]
    pub multiplier: i64,
    #[arg(long, value_name = "Q-1,Q0,Q1", value_parser = parse_dist)]
    pub dist: Option<IncrementDistribution>,
    /// Keep odd composite moduli instead of skipping them.
    #[arg(long)]
    pub allow_composite: bool,
    #[arg(long, value_name = "P")]
    pub max_p_override: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct CanonArgs {
    /// Digits, most significant first, from `+`/`1`, `0`, `-`.
    #[arg(allow_hyphen_values = true)]
    pub digits: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsMode {
    /// Exact expectations over every string (length at most 14).
    Exhaustive,
    /// Seeded Monte Carlo estimate.
    Mc,
    /// Block event frequencies and class frequencies.
    Events,
    /// Distribution of the number of `1` increments.
    Ones,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    FirstOne,
    FirstMinusOne,
    Nonzero,
}

impl From<ClassArg> for Conditioning {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::FirstOne => Conditioning::FirstOne,
            ClassArg::FirstMinusOne => Conditioning::FirstMinusOne,
            ClassArg::Nonzero => Conditioning::Nonzero,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[arg(long, value_enum, default_value_t = StatsMode::Mc)]
    pub mode: StatsMode,
    /// String length (block horizon in `events` mode).
    #[arg(long, value_name = "N")]
    pub steps: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Strings counted by the pair statistics.
    #[arg(long, value_enum, default_value_t = ClassArg::FirstOne)]
    pub class: ClassArg,
    /// Length of the string whose class is tallied in `events` mode.
    #[arg(long, default_value_t = 8)]
    pub class_length: usize,
    /// Window half-width for `ones` mode.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Increment probabilities for `ones` mode.
    #[arg(long, value_name = "Q-1,Q0,Q1", value_parser = parse_dist)]
    pub dist: Option<IncrementDistribution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Auto,
    Exact,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Length for the counting regions and the binomial tail.
    #[arg(long, value_name = "N", default_value_t = 1000)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.005)]
    pub eps: f64,
    /// Also report predicted thresholds for this modulus.
    #[arg(long = "p", value_name = "P")]
    pub modulus: Option<u64>,
    #[arg(long, value_enum, default_value_t = PathArg::Auto)]
    pub path: PathArg,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub process: ProcessArgs,
    #[arg(long, value_name = "N")]
    pub steps: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Dense-vector modulus limit, honouring `--max-p-override`.
pub fn max_modulus(over: Option<u64>) -> u64 {
    over.unwrap_or(DEFAULT_MAX_MODULUS)
}

pub fn parse_dist(s: &str) -> Result<IncrementDistribution> {
    let q: Vec<f64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .with_context(|| format!("bad probability {x:?}"))
        })
        .collect::<Result<_>>()?;
    if q.len() != 3 {
        bail!("expected three probabilities q-1,q0,q1, got {}", q.len());
    }
    Ok(IncrementDistribution::new(q[0], q[1], q[2])?)
}

pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s.split_once(':').context("expected LO:HI")?;
    let (lo, hi): (u64, u64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        bail!("empty range {lo}:{hi}");
    }
    Ok((lo, hi))
}
