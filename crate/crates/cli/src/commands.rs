use std::io::Write;

use anyhow::{bail, ensure, Result};
use cdg_core::bounds::{
    binomial_tail_count, c2_of_eps, compute_constants, multinomial_region_count, predict_threshold,
    stirling_upper_bound, value_count_bound_log2, BoundConstants, CountPath, CountRegion,
    RegionKind, ThresholdConstant,
};
use cdg_core::canonical::{canonicalize, decompose_blocks, SequenceClass, TableCell, TableColumn};
use cdg_core::exact::{evolve_observed, first_crossings, TraceRow};
use cdg_core::process::{IncrementDistribution, ProcessParams};
use cdg_core::stats::{
    event_probabilities, exhaustive_expectations, ones_count_statistics, CellStat, Conditioning,
    EventReport, FrequencyReport, OnesReport, Parity,
};
use cdg_core::SignedDigitString;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    max_modulus, BoundsArgs, CanonArgs, Cli, Command, EvolveArgs, OutputFormat, PathArg, ScanArgs,
    SimulateArgs, StatsArgs, StatsMode,
};
use crate::format::{fmt_float, open_output, write_csv, write_json};
use crate::parallel;
use crate::primes::is_prime;

/// Distance thresholds reported by `scan`.
pub const SCAN_THRESHOLDS: [f64; 4] = [0.75, 0.5, 0.25, 0.05];

/// Header plus rows of a CSV rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A subcommand result that can be rendered.
pub trait Report: Serialize {
    fn default_format(&self) -> OutputFormat;

    fn csv(&self) -> Option<CsvTable> {
        None
    }
}

/// Parses the command line result and runs it on a pool sized by `CDG_THREADS`.
pub fn run(cli: &Cli) -> Result<()> {
    let pool = parallel::thread_pool()?;
    pool.install(|| match &cli.command {
        Command::Evolve(a) => emit(&cmd_evolve(a)?, cli),
        Command::Scan(a) => emit(&cmd_scan(a)?, cli),
        Command::Canon(a) => emit(&cmd_canon(a)?, cli),
        Command::Stats(a) => emit(&cmd_stats(a)?, cli),
        Command::Bounds(a) => emit(&cmd_bounds(a)?, cli),
        Command::Simulate(a) => emit(&cmd_simulate(a)?, cli),
    })
}

fn emit<R: Report>(report: &R, cli: &Cli) -> Result<()> {
    let format = cli.format.unwrap_or_else(|| report.default_format());
    let table = match format {
        OutputFormat::Csv => match report.csv() {
            Some(t) => Some(t),
            None => bail!("this subcommand has no CSV output; use --format json"),
        },
        OutputFormat::Json => None,
    };
    let mut out = open_output(cli.out.as_deref())?;
    match table {
        Some(t) => {
            let header: Vec<&str> = t.header.iter().map(String::as_str).collect();
            write_csv(&mut *out, &header, &t.rows)?
        }
        None => write_json(&mut *out, report)?,
    }
    out.flush()?;
    Ok(())
}

fn dist_array(d: &IncrementDistribution) -> [f64; 3] {
    [d.q_minus1(), d.q_zero(), d.q_plus1()]
}

fn opt_field<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

// evolve

#[derive(Debug, Clone, Serialize)]
pub struct EvolveRow {
    pub step: usize,
    pub tvd: f64,
    pub entropy_bits: f64,
    pub support: usize,
    pub typical99: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub typical_delta: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvolveReport {
    pub command: &'static str,
    pub p: u64,
    pub multiplier: i64,
    pub dist: [f64; 3],
    pub steps: usize,
    pub delta: Option<f64>,
    pub rows: Vec<EvolveRow>,
}

pub fn cmd_evolve(args: &EvolveArgs) -> Result<EvolveReport> {
    let params = args.process.params()?;
    if let Some(d) = args.delta {
        ensure!(
            (0.0..1.0).contains(&d),
            "--delta must lie in [0, 1), got {d}"
        );
    }
    let mut rows = Vec::with_capacity(args.steps + 1);
    evolve_observed(
        &params,
        args.steps,
        max_modulus(args.max_p_override),
        |n, dist| {
            let t = TraceRow::of(n, dist);
            rows.push(EvolveRow {
                step: t.step,
                tvd: t.tvd,
                entropy_bits: t.entropy_bits,
                support: t.support,
                typical99: t.typical99,
                typical_delta: args.delta.map(|d| dist.typical_set_size(d)),
            });
        },
    )?;
    Ok(EvolveReport {
        command: "evolve",
        p: params.modulus(),
        multiplier: params.multiplier(),
        dist: dist_array(params.increments()),
        steps: args.steps,
        delta: args.delta,
        rows,
    })
}

impl Report for EvolveReport {
    fn default_format(&self) -> OutputFormat {
        OutputFormat::Csv
    }

    fn csv(&self) -> Option<CsvTable> {
        let mut header: Vec<String> = ["step", "tvd", "entropy_bits", "support", "typical99"]
            .map(String::from)
            .to_vec();
        if self.delta.is_some() {
            header.push("typical_delta".into());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.step.to_string(),
                    fmt_float(r.tvd),
                    fmt_float(r.entropy_bits),
                    r.support.to_string(),
                    r.typical99.to_string(),
                ];
                if let Some(t) = r.typical_delta {
                    row.push(t.to_string());
                }
                row
            })
            .collect();
        Some(CsvTable { header, rows })
    }
}

// scan

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedThresholds {
    pub support: u64,
    pub c1_basic: u64,
    pub c1_refined: u64,
    pub c_hat: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub p: u64,
    pub log2_p: f64,
    pub prime: bool,
    pub max_steps: usize,
    /// First step below each of [`SCAN_THRESHOLDS`]; `None` if not reached within `max_steps`.
    pub crossings: Vec<Option<usize>>,
    pub predicted: PredictedThresholds,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub command: &'static str,
    pub multiplier: i64,
    pub dist: [f64; 3],
    pub thresholds: [f64; 4],
    pub skipped: Vec<u64>,
    pub rows: Vec<ScanRow>,
}

/// Default step budget: well past every predicted threshold.
pub fn default_scan_steps(p: u64) -> usize {
    8 * (p as f64).log2().ceil() as usize + 32
}

fn predicted(p: u64) -> Result<PredictedThresholds> {
    Ok(PredictedThresholds {
        support: predict_threshold(p, ThresholdConstant::SupportBound)?,
        c1_basic: predict_threshold(p, ThresholdConstant::C1Basic)?,
        c1_refined: predict_threshold(p, ThresholdConstant::C1Refined)?,
        c_hat: predict_threshold(p, ThresholdConstant::CHat)?,
    })
}

pub fn cmd_scan(args: &ScanArgs) -> Result<ScanReport> {
    let mut moduli = Vec::new();
    let mut skipped = Vec::new();
    for &p in &args.moduli {
        if is_prime(p) || args.allow_composite {
            moduli.push(p);
        } else {
            eprintln!("warning: {p} is not prime; skipped (pass --allow-composite to keep odd composites)");
            skipped.push(p);
        }
    }
    if let Some((lo, hi)) = args.range {
        let start = lo.max(3) | 1;
        let keep = |p: &u64| args.allow_composite || is_prime(*p);
        moduli.extend((start..=hi).step_by(2).filter(keep));
    }
    ensure!(!moduli.is_empty(), "no moduli to scan; pass --p or --range");

    let dist = args.dist.unwrap_or(IncrementDistribution::UNIFORM);
    let limit = max_modulus(args.max_p_override);
    let params: Vec<ProcessParams> = moduli
        .iter()
        .map(|&p| ProcessParams::new(p, args.multiplier, dist))
        .collect::<Result<_, _>>()?;
    let rows = params
        .par_iter()
        .map(|params| {
            let p = params.modulus();
            let max_steps = args.steps.unwrap_or_else(|| default_scan_steps(p));
            let crossings = first_crossings(params, &SCAN_THRESHOLDS, max_steps, limit)?;
            Ok(ScanRow {
                p,
                log2_p: (p as f64).log2(),
                prime: is_prime(p),
                max_steps,
                crossings,
                predicted: predicted(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport {
        command: "scan",
        multiplier: args.multiplier,
        dist: dist_array(&dist),
        thresholds: SCAN_THRESHOLDS,
        skipped,
        rows,
    })
}

impl Report for ScanReport {
    fn default_format(&self) -> OutputFormat {
        OutputFormat::Csv
    }

    fn csv(&self) -> Option<CsvTable> {
        let mut header: Vec<String> = ["p", "log2_p", "prime", "max_steps"]
            .map(String::from)
            .to_vec();
        header.extend(self.thresholds.iter().map(|t| format!("cross_{t}")));
        header.extend(
            ThresholdConstant::ALL
                .iter()
                .map(|c| format!("pred_{}", c.name())),
        );
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    r.p.to_string(),
                    fmt_float(r.log2_p),
                    r.prime.to_string(),
                    r.max_steps.to_string(),
                ];
                row.extend(r.crossings.iter().map(|c| opt_field(*c)));
                let pr = r.predicted;
                row.extend(
                    [pr.support, pr.c1_basic, pr.c1_refined, pr.c_hat].map(|x| x.to_string()),
                );
                row
            })
            .collect();
        Some(CsvTable { header, rows })
    }
}

// canon

#[derive(Debug, Clone, Serialize)]
pub struct BlockOut {
    pub start: usize,
    pub digits: String,
    pub is_last: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlocksOut {
    pub leading_zeros: usize,
    pub blocks: Vec<BlockOut>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonReport {
    pub command: &'static str,
    pub input: String,
    pub length: usize,
    pub class: SequenceClass,
    pub canonical: String,
    /// Decimal value, as text so that long strings keep every digit.
    pub value: String,
    /// `None` for the all-zero class.
    pub blocks: Option<BlocksOut>,
}

pub fn cmd_canon(args: &CanonArgs) -> Result<CanonReport> {
    let s: SignedDigitString = args.digits.trim().parse()?;
    canon_report(&s)
}

pub fn canon_report(s: &SignedDigitString) -> Result<CanonReport> {
    let form = canonicalize(s);
    let blocks = match form.class {
        SequenceClass::AllZero => None,
        _ => {
            let d = decompose_blocks(s)?;
            Some(BlocksOut {
                leading_zeros: d.leading_zeros,
                blocks: d
                    .blocks
                    .iter()
                    .map(|b| BlockOut {
                        start: b.start,
                        digits: b.digits.to_string(),
                        is_last: b.is_last,
                    })
                    .collect(),
            })
        }
    };
    Ok(CanonReport {
        command: "canon",
        input: s.to_string(),
        length: s.len(),
        class: form.class,
        canonical: form.digits.to_string(),
        value: s.value_big().to_string(),
        blocks,
    })
}

impl Report for CanonReport {
    fn default_format(&self) -> OutputFormat {
        OutputFormat::Json
    }
}

// stats

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityOut {
    All,
    Odd,
    Even,
}

impl From<Parity> for ParityOut {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Odd => ParityOut::Odd,
            Parity::Even => ParityOut::Even,
        }
    }
}

impl ParityOut {
    fn label(self) -> &'static str {
        match self {
            ParityOut::All => "all",
            ParityOut::Odd => "odd",
            ParityOut::Even => "even",
        }
    }
}

/// One reported frequency: mean count per string, count / n, and its standard error.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyRow {
    pub kind: &'static str,
    pub row: &'static str,
    pub column: &'static str,
    pub parity: ParityOut,
    /// Limiting frequency where one is known.
    pub limit: Option<f64>,
    pub count: f64,
    pub frequency: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub command: &'static str,
    pub mode: &'static str,
    pub n: usize,
    pub conditioning: Conditioning,
    pub exact: bool,
    pub seed: Option<u64>,
    pub trials: u64,
    pub samples: u64,
    pub rows: Vec<FrequencyRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventsOut {
    pub command: &'static str,
    pub mode: &'static str,
    pub seed: u64,
    pub expected: f64,
    #[serde(flatten)]
    pub report: EventReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct OnesOut {
    pub command: &'static str,
    pub mode: &'static str,
    pub seed: u64,
    pub q_plus1: f64,
    #[serde(flatten)]
    pub report: OnesReport,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum StatsReport {
    Table(TableReport),
    Events(EventsOut),
    Ones(OnesOut),
}

/// Flattens a frequency report into cell, column and lemma rows.
pub fn frequency_rows(r: &FrequencyReport) -> Vec<FrequencyRow> {
    let n = r.n as f64;
    let row = |kind, row, column, parity, limit, s: CellStat| FrequencyRow {
        kind,
        row,
        column,
        parity,
        limit,
        count: s.mean * n,
        frequency: s.mean,
        stderr: s.stderr,
    };
    let mut out = Vec::new();
    for cell in TableCell::all() {
        let (rl, cl) = (cell.row.label(), cell.column.label());
        out.push(row(
            "cell",
            rl,
            cl,
            ParityOut::All,
            Some(cell.limit_frequency()),
            r.cell(cell),
        ));
        for p in Parity::ALL {
            out.push(row("cell", rl, cl, p.into(), None, r.cell_parity(cell, p)));
        }
    }
    for col in TableColumn::ALL {
        let cl = col.label();
        out.push(row(
            "column",
            "",
            cl,
            ParityOut::All,
            Some(col.limit_frequency()),
            r.column(col),
        ));
        for p in Parity::ALL {
            let limit = (col == TableColumn::OneOne).then(|| col.limit_frequency() / 2.0);
            out.push(row(
                "column",
                "",
                cl,
                p.into(),
                limit,
                r.column_parity(col, p),
            ));
        }
    }
    for (k, name) in ["n1", "n2", "n3", "n4"].into_iter().enumerate() {
        out.push(row("lemma", name, "", ParityOut::All, None, r.lemma(k + 1)));
    }
    out
}

pub fn cmd_stats(args: &StatsArgs) -> Result<StatsReport> {
    let conditioning: Conditioning = args.class.into();
    let table = |mode, seed, r: FrequencyReport| {
        StatsReport::Table(TableReport {
            command: "stats",
            mode,
            n: r.n,
            conditioning: r.conditioning,
            exact: r.exact,
            seed,
            trials: r.trials,
            samples: r.samples,
            rows: frequency_rows(&r),
        })
    };
    Ok(match args.mode {
        StatsMode::Exhaustive => table(
            "exhaustive",
            None,
            exhaustive_expectations(args.steps, conditioning)?,
        ),
        StatsMode::Mc => {
            ensure!(args.trials >= 1, "--trials must be at least 1");
            ensure!(args.dist.is_none(), "--dist applies to ones mode only");
            let params = ProcessParams::standard(3)?;
            let r = parallel::monte_carlo_frequencies(
                &params,
                args.steps,
                args.trials,
                args.seed,
                conditioning,
            )?;
            table("mc", Some(args.seed), r)
        }
        StatsMode::Events => StatsReport::Events(EventsOut {
            command: "stats",
            mode: "events",
            seed: args.seed,
            expected: 1.0 / 6.0,
            report: event_probabilities(args.steps, args.class_length, args.trials, args.seed)?,
        }),
        StatsMode::Ones => {
            let dist = args.dist.unwrap_or(IncrementDistribution::UNIFORM);
            StatsReport::Ones(OnesOut {
                command: "stats",
                mode: "ones",
                seed: args.seed,
                q_plus1: dist.q_plus1(),
                report: ones_count_statistics(&dist, args.steps, args.trials, args.seed, args.eps)?,
            })
        }
    })
}

impl Report for StatsReport {
    fn default_format(&self) -> OutputFormat {
        OutputFormat::Json
    }

    fn csv(&self) -> Option<CsvTable> {
        let header = |h: &[&str]| h.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Some(match self {
            StatsReport::Table(t) => CsvTable {
                header: header(&[
                    "kind",
                    "row",
                    "column",
                    "parity",
                    "limit",
                    "count",
                    "frequency",
                    "stderr",
                ]),
                rows: t
                    .rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.kind.to_string(),
                            r.row.to_string(),
                            r.column.to_string(),
                            r.parity.label().to_string(),
                            r.limit.map(fmt_float).unwrap_or_default(),
                            fmt_float(r.count),
                            fmt_float(r.frequency),
                            fmt_float(r.stderr),
                        ]
                    })
                    .collect(),
            },
            StatsReport::Events(e) => {
                let r = &e.report;
                let c = &r.classes;
                let rows = [
                    ("D", &r.d, e.expected),
                    ("E", &r.e, e.expected),
                    ("first_one", &c.first_one, c.exact_first_one),
                    (
                        "first_minus_one",
                        &c.first_minus_one,
                        c.exact_first_minus_one,
                    ),
                    ("all_zero", &c.all_zero, c.exact_all_zero),
                ]
                .into_iter()
                .map(|(name, s, expected)| {
                    vec![
                        name.to_string(),
                        s.hits.to_string(),
                        s.total.to_string(),
                        fmt_float(s.frequency),
                        fmt_float(s.stderr),
                        fmt_float(expected),
                    ]
                })
                .collect();
                CsvTable {
                    header: header(&["event", "hits", "total", "frequency", "stderr", "expected"]),
                    rows,
                }
            }
            StatsReport::Ones(o) => CsvTable {
                header: header(&["ones", "trials"]),
                rows: o
                    .report
                    .histogram
                    .iter()
                    .enumerate()
                    .map(|(k, c)| vec![k.to_string(), c.to_string()])
                    .collect(),
            },
        })
    }
}

// bounds

#[derive(Debug, Clone, Serialize)]
pub struct TailOut {
    pub j_min: usize,
    pub j_max: usize,
    pub count: String,
    pub log2: f64,
    pub rate: f64,
    pub in_bound_regime: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionOut {
    pub kind: RegionKind,
    pub tuples: u64,
    pub exact: Option<String>,
    pub log2: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StirlingOut {
    pub exponent: f64,
    pub log2_bound: f64,
    pub prefactor_degree: u32,
    pub log2_with_prefactor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValueBoundOut {
    pub basic_log2: Option<f64>,
    pub refined_log2: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdOut {
    pub name: &'static str,
    pub constant: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub command: &'static str,
    pub n: usize,
    pub eps: f64,
    pub path: &'static str,
    pub constants: BoundConstants,
    pub c2: Option<f64>,
    pub binomial_tail: Option<TailOut>,
    pub regions: Vec<RegionOut>,
    pub stirling: Option<StirlingOut>,
    pub value_bound: ValueBoundOut,
    pub p: Option<u64>,
    pub thresholds: Option<Vec<ThresholdOut>>,
    /// Quantities that are undefined at this `(n, eps)`, with the reason.
    pub notes: Vec<String>,
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<BoundsReport> {
    ensure!(
        args.eps.is_finite() && args.eps >= 0.0,
        "--eps must be a non-negative number"
    );
    let (path, path_name) = match args.path {
        PathArg::Auto => (CountPath::Auto, "auto"),
        PathArg::Exact => (CountPath::Exact, "exact"),
        PathArg::Log => (CountPath::LogGamma, "log"),
    };
    let (n, eps) = (args.steps, args.eps);
    let mut notes = Vec::new();
    let mut keep = |what: &str, r: cdg_core::Result<()>| {
        if let Err(e) = r {
            notes.push(format!("{what}: {e}"));
        }
    };

    let mut c2 = None;
    keep("c2", c2_of_eps(eps).map(|v| c2 = Some(v)));

    let mut binomial_tail = None;
    keep(
        "binomial_tail",
        binomial_tail_count(n, eps).map(|t| {
            binomial_tail = Some(TailOut {
                j_min: t.j_min,
                j_max: t.j_max,
                count: t.count.to_string(),
                log2: t.log2,
                rate: if n == 0 { 0.0 } else { t.log2 / n as f64 },
                in_bound_regime: t.in_bound_regime,
            })
        }),
    );

    let mut regions = Vec::new();
    for kind in [RegionKind::Basic, RegionKind::Refined] {
        let r = CountRegion::new(kind, n, eps)
            .and_then(|region| multinomial_region_count(&region, path));
        keep(
            &format!("region {kind:?}"),
            r.map(|c| {
                regions.push(RegionOut {
                    kind,
                    tuples: c.tuples,
                    exact: c.exact.as_ref().map(|x| x.to_string()),
                    log2: c.log2,
                    exponent: c.exponent(),
                })
            }),
        );
    }

    let mut stirling = None;
    keep(
        "stirling",
        stirling_upper_bound(n, eps).map(|s| {
            stirling = Some(StirlingOut {
                exponent: s.exponent,
                log2_bound: s.log2_bound,
                prefactor_degree: s.prefactor_degree,
                log2_with_prefactor: s.log2_with_prefactor(),
            })
        }),
    );

    let mut value_bound = ValueBoundOut {
        basic_log2: None,
        refined_log2: None,
    };
    keep(
        "value_bound basic",
        value_count_bound_log2(RegionKind::Basic, n, eps, path)
            .map(|v| value_bound.basic_log2 = Some(v)),
    );
    keep(
        "value_bound refined",
        value_count_bound_log2(RegionKind::Refined, n, eps, path)
            .map(|v| value_bound.refined_log2 = Some(v)),
    );

    let thresholds = match args.modulus {
        Some(p) => Some(
            ThresholdConstant::ALL
                .iter()
                .map(|&c| {
                    Ok(ThresholdOut {
                        name: c.name(),
                        constant: c.value(),
                        steps: predict_threshold(p, c)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };

    Ok(BoundsReport {
        command: "bounds",
        n,
        eps,
        path: path_name,
        constants: compute_constants(),
        c2,
        binomial_tail,
        regions,
        stirling,
        value_bound,
        p: args.modulus,
        thresholds,
        notes,
    })
}

impl Report for BoundsReport {
    fn default_format(&self) -> OutputFormat {
        OutputFormat::Json
    }
}

// simulate

/// Text attached to every simulate report.
pub const PLUG_IN_NOTE: &str =
    "plug-in estimates are biased upward when trials are not much larger than p; \
bias_estimate is the expected plug-in distance of an exactly uniform law";

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub p: u64,
    pub multiplier: i64,
    pub dist: [f64; 3],
    pub steps: usize,
    pub trials: u64,
    pub seed: u64,
    pub plug_in_tvd: f64,
    pub bias_estimate: f64,
    pub note: &'static str,
    pub observed: usize,
    /// `(residue, count)` pairs in increasing residue order; unobserved residues omitted.
    pub histogram: Vec<(u64, u64)>,
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<SimulateReport> {
    let params = args.process.params()?;
    ensure!(args.trials >= 1, "--trials must be at least 1");
    let h = parallel::simulate_endpoints(&params, args.steps, args.trials, args.seed);
    Ok(SimulateReport {
        command: "simulate",
        p: params.modulus(),
        multiplier: params.multiplier(),
        dist: dist_array(params.increments()),
        steps: args.steps,
        trials: args.trials,
        seed: args.seed,
        plug_in_tvd: h.plug_in_tvd(),
        bias_estimate: h.uniform_bias_estimate(),
        note: PLUG_IN_NOTE,
        observed: h.counts.len(),
        histogram: h.counts.iter().map(|(&k, &v)| (k, v)).collect(),
    })
}

impl Report for SimulateReport {
    fn default_format(&self) -> OutputFormat {
        OutputFormat::Json
    }

    fn csv(&self) -> Option<CsvTable> {
        Some(CsvTable {
            header: vec!["residue".into(), "count".into()],
            rows: self
                .histogram
                .iter()
                .map(|(k, v)| vec![k.to_string(), v.to_string()])
                .collect(),
        })
    }
}
