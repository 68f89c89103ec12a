use std::path::PathBuf;
use std::process::{Command as Process, Output};

use cdg::commands::{
    cmd_bounds, cmd_canon, cmd_evolve, cmd_scan, cmd_simulate, cmd_stats, StatsReport,
    SCAN_THRESHOLDS,
};
use cdg::config::{Cli, Command};
use cdg_core::process::{simulate_endpoints, ProcessParams};
use cdg_core::stats::{exhaustive_expectations, monte_carlo_frequencies, Conditioning};
use clap::Parser;
use serde_json::Value;

fn parse(args: &[&str]) -> Command {
    let mut argv = vec!["cdg"];
    argv.extend_from_slice(args);
    Cli::try_parse_from(argv).expect("arguments parse").command
}

fn cdg(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_cdg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cdg_ok(args: &[&str]) -> String {
    let out = cdg(args);
    assert!(
        out.status.success(),
        "cdg {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn cdg_json(args: &[&str]) -> Value {
    serde_json::from_str(&cdg_ok(args)).expect("valid JSON")
}

fn schema() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::draft202012::new(&schema).expect("schema compiles")
}

#[test]
fn evolve_first_row_is_point_mass() {
    let Command::Evolve(a) = parse(&["evolve", "--p", "101", "--steps", "0"]) else {
        unreachable!()
    };
    let r = cmd_evolve(&a).unwrap();
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert_eq!(row.step, 0);
    assert!((row.tvd - (1.0 - 1.0 / 101.0)).abs() < 1e-15);
    assert_eq!(row.entropy_bits, 0.0);
    assert_eq!((row.support, row.typical99), (1, 1));

    let csv = cdg_ok(&["evolve", "--p", "101", "--steps", "0"]);
    assert_eq!(
        csv,
        "step,tvd,entropy_bits,support,typical99\n0,0.990099009901,0,1,1\n"
    );
}

#[test]
fn evolve_mod_three_is_uniform_after_one_step() {
    let Command::Evolve(a) = parse(&["evolve", "--p", "3", "--steps", "1"]) else {
        unreachable!()
    };
    let r = cmd_evolve(&a).unwrap();
    let row = &r.rows[1];
    assert_eq!(row.step, 1);
    assert!(row.tvd.abs() < 1e-15);
    assert!((row.entropy_bits - 3f64.log2()).abs() < 1e-12);
    assert_eq!((row.support, row.typical99), (3, 3));
    assert_eq!(
        cdg_ok(&["evolve", "--p", "3", "--steps", "1"])
            .lines()
            .nth(2),
        Some("1,0,1.58496250072,3,3")
    );
}

#[test]
fn evolve_rows_are_monotone_and_stable() {
    let Command::Evolve(a) = parse(&["evolve", "--p", "101", "--steps", "200"]) else {
        unreachable!()
    };
    let r = cmd_evolve(&a).unwrap();
    assert_eq!(r.rows.len(), 201);
    for w in r.rows.windows(2) {
        assert!(
            w[1].tvd <= w[0].tvd + 1e-12,
            "tvd rose at step {}",
            w[1].step
        );
    }
    let args = ["evolve", "--p", "101", "--steps", "200", "--delta", "0.05"];
    let first = cdg_ok(&args);
    assert_eq!(first, cdg_ok(&args));
    assert!(first.starts_with("step,tvd,entropy_bits,support,typical99,typical_delta\n"));
}

#[test]
fn evolve_respects_memory_guard() {
    let out = cdg(&["evolve", "--p", "67108865", "--steps", "1"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("67108865"));
    let Command::Evolve(a) = parse(&[
        "evolve",
        "--p",
        "1001",
        "--steps",
        "1",
        "--max-p-override",
        "1000",
    ]) else {
        unreachable!()
    };
    assert!(cmd_evolve(&a).is_err());
}

#[test]
fn config_errors_exit_nonzero() {
    for args in [
        &["evolve", "--p", "100", "--steps", "2"][..],
        &["evolve", "--p", "101", "--steps", "2", "--dist", "0.5,0.5"],
        &[
            "evolve",
            "--p",
            "101",
            "--steps",
            "2",
            "--dist",
            "0.5,0.5,0.5",
        ],
        &["evolve", "--p", "15", "--steps", "2", "--multiplier", "3"],
        &["evolve", "--p", "101", "--steps", "2", "--delta", "1.5"],
        &["canon", "+x-"],
        &["canon", "+-", "--format", "csv"],
        &["stats", "--mode", "exhaustive", "--steps", "15"],
        &["simulate", "--p", "101", "--steps", "3", "--trials", "0"],
        &["scan", "--p", "9"],
    ] {
        let out = cdg(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(out.stdout.is_empty(), "{args:?} wrote data");
        assert!(!out.stderr.is_empty(), "{args:?} gave no diagnostic");
    }
}

#[test]
fn canon_examples() {
    let Command::Canon(a) = parse(&["canon", "00+-0+0+-++"]) else {
        unreachable!()
    };
    let r = cmd_canon(&a).unwrap();
    assert_eq!(r.canonical, "000+0+00+++");
    assert_eq!(r.value, "167");
    let blocks = r.blocks.unwrap();
    assert_eq!(blocks.leading_zeros, 2);
    let parts: Vec<_> = blocks
        .blocks
        .iter()
        .map(|b| (b.start, b.digits.as_str(), b.is_last))
        .collect();
    assert_eq!(
        parts,
        [
            (2, "+-0", false),
            (5, "+0", false),
            (7, "+-", false),
            (9, "+", false),
            (10, "+", true)
        ]
    );

    let v = cdg_json(&["canon", "000"]);
    assert_eq!(v["class"], "AllZero");
    assert_eq!(v["value"], "0");
    assert_eq!(v["blocks"], Value::Null);

    let v = cdg_json(&["canon", "+--"]);
    assert_eq!(v["canonical"], "00+");
    assert_eq!(v["value"], "1");

    let v = cdg_json(&["canon", "-+0-"]);
    assert_eq!(v["class"], "FirstMinusOne");
    assert_eq!(v["value"], "-5");
    assert_eq!(v["canonical"], "0-0-");
}

#[test]
fn canon_long_string_keeps_every_digit() {
    let digits = "+".repeat(200);
    let v = cdg_json(&["canon", &digits]);
    let expected = (num_bigint_pow2(200) - 1u32).to_string();
    assert_eq!(v["value"], expected.as_str());
    assert_eq!(v["canonical"], digits.as_str());
}

fn num_bigint_pow2(k: u32) -> num_bigint::BigUint {
    num_bigint::BigUint::from(1u32) << k
}

#[test]
fn scan_examples() {
    let Command::Scan(a) = parse(&["scan", "--p", "3"]) else {
        unreachable!()
    };
    let r = cmd_scan(&a).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.rows[0].crossings[3], Some(1));

    let Command::Scan(a) = parse(&["scan", "--range", "3:3000"]) else {
        unreachable!()
    };
    let r = cmd_scan(&a).unwrap();
    assert_eq!(r.rows.len(), 429, "odd primes up to 3000");
    assert_eq!(SCAN_THRESHOLDS[3], 0.05);
    for row in &r.rows {
        assert!(row.prime);
        let floor = row.log2_p.floor() as usize;
        let cross = row.crossings[3].unwrap_or(row.max_steps + 1);
        assert!(
            cross + 1 >= floor,
            "p={} crossing {cross} below {floor} - 1",
            row.p
        );
        for w in row.crossings.windows(2) {
            assert!(
                w[0] <= w[1] || w[1].is_none(),
                "crossings out of order at p={}",
                row.p
            );
        }
        let pr = row.predicted;
        assert!(
            pr.support <= pr.c1_basic && pr.c1_basic <= pr.c1_refined && pr.c1_refined <= pr.c_hat
        );
    }
}

#[test]
fn scan_composites() {
    let out = cdg(&["scan", "--p", "9,11"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("9 is not prime"));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("11,"));

    let csv = cdg_ok(&["scan", "--p", "9,11", "--allow-composite"]);
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((first[0], first[2]), ("9", "false"));
}

#[test]
fn stats_modes_match_core() {
    let Command::Stats(a) = parse(&[
        "stats",
        "--mode",
        "exhaustive",
        "--steps",
        "6",
        "--class",
        "nonzero",
    ]) else {
        unreachable!()
    };
    let StatsReport::Table(t) = cmd_stats(&a).unwrap() else {
        panic!("table report")
    };
    let core = exhaustive_expectations(6, Conditioning::Nonzero).unwrap();
    assert_eq!(t.samples, core.samples);
    let n2 = t
        .rows
        .iter()
        .find(|r| r.kind == "lemma" && r.row == "n2")
        .unwrap();
    assert_eq!(n2.count, 0.0);
    assert_eq!(t.rows.len(), 88);

    let params = ProcessParams::standard(3).unwrap();
    let core = monte_carlo_frequencies(&params, 300, 40_000, 11, Conditioning::FirstOne).unwrap();
    let par =
        cdg::parallel::monte_carlo_frequencies(&params, 300, 40_000, 11, Conditioning::FirstOne)
            .unwrap();
    assert_eq!(core, par);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "stats", "--mode", "mc", "--steps", "500", "--trials", "20000", "--seed", "3", "--format",
        "csv",
    ];
    let run = |threads: &str| {
        let out = Process::new(env!("CARGO_BIN_EXE_cdg"))
            .args(args)
            .env("CDG_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
    let bad = Process::new(env!("CARGO_BIN_EXE_cdg"))
        .args(args)
        .env("CDG_THREADS", "many")
        .output()
        .unwrap();
    assert!(!bad.status.success());
}

#[test]
fn stats_csv_quotes_labels() {
    let csv = cdg_ok(&[
        "stats",
        "--mode",
        "exhaustive",
        "--steps",
        "4",
        "--format",
        "csv",
    ]);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "kind",
            "row",
            "column",
            "parity",
            "limit",
            "count",
            "frequency",
            "stderr"
        ]
    );
    let records: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 88);
    assert!(records.iter().all(|r| r.len() == 8));
    assert_eq!(&records[0][1], "b[a-1]=1,b[a]=1");
}

#[test]
fn simulate_examples() {
    let Command::Simulate(a) = parse(&[
        "simulate", "--p", "101", "--steps", "50", "--trials", "1000000",
    ]) else {
        unreachable!()
    };
    let mixed = cmd_simulate(&a).unwrap();
    assert!(mixed.plug_in_tvd <= 0.05, "{}", mixed.plug_in_tvd);
    assert!(!mixed.note.is_empty());
    assert_eq!(
        mixed.histogram.iter().map(|&(_, c)| c).sum::<u64>(),
        1_000_000
    );

    let Command::Simulate(a) = parse(&[
        "simulate", "--p", "101", "--steps", "3", "--trials", "1000000",
    ]) else {
        unreachable!()
    };
    let early = cmd_simulate(&a).unwrap();
    assert!(early.plug_in_tvd >= 0.8, "{}", early.plug_in_tvd);
    assert_eq!(early.observed, 15);

    let args = [
        "simulate", "--p", "101", "--steps", "20", "--trials", "50000", "--seed", "9",
    ];
    assert_eq!(cdg_ok(&args), cdg_ok(&args));

    let params = ProcessParams::standard(101).unwrap();
    assert_eq!(
        simulate_endpoints(&params, 20, 50_000, 9),
        cdg::parallel::simulate_endpoints(&params, 20, 50_000, 9)
    );
}

#[test]
fn bounds_report() {
    let Command::Bounds(a) = parse(&[
        "bounds", "--steps", "1000", "--eps", "0.005", "--p", "10007",
    ]) else {
        unreachable!()
    };
    let r = cmd_bounds(&a).unwrap();
    assert!((r.constants.c_hat - 1.01999186).abs() < 1e-7);
    assert!(
        r.constants.c1_basic < r.constants.c1_refined && r.constants.c1_refined < r.constants.c_hat
    );
    assert_eq!(r.regions.len(), 2);
    assert!(r.regions.iter().all(|g| g.exact.is_some()));
    assert!(r.notes.is_empty(), "{:?}", r.notes);
    assert_eq!(r.thresholds.as_ref().unwrap().len(), 4);

    let v = cdg_json(&["bounds", "--steps", "11", "--eps", "0.2"]);
    assert_eq!(v["c2"], Value::Null);
    assert!(!v["notes"].as_array().unwrap().is_empty());
    assert!(v["value_bound"]["basic_log2"].is_number());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("cdg-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.csv");
    let out = cdg(&[
        "evolve",
        "--p",
        "7",
        "--steps",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_outputs_match_schema() {
    let validator = schema();
    let runs: &[&[&str]] = &[
        &["evolve", "--p", "31", "--steps", "5", "--format", "json"],
        &[
            "evolve", "--p", "31", "--steps", "5", "--delta", "0.1", "--format", "json",
        ],
        &["scan", "--p", "3,5,7,101", "--format", "json"],
        &[
            "scan",
            "--p",
            "9",
            "--allow-composite",
            "--steps",
            "2",
            "--format",
            "json",
        ],
        &["canon", "00+-0+0+-++"],
        &["canon", "000"],
        &["canon", "-+0-"],
        &["canon", ""],
        &["stats", "--mode", "exhaustive", "--steps", "5"],
        &["stats", "--mode", "mc", "--steps", "50", "--trials", "10"],
        &[
            "stats", "--mode", "events", "--steps", "10", "--trials", "10",
        ],
        &["stats", "--mode", "ones", "--steps", "10", "--trials", "10"],
        &["bounds"],
        &["bounds", "--steps", "11", "--eps", "0.2", "--p", "101"],
        &["bounds", "--steps", "4000", "--path", "log"],
        &["simulate", "--p", "11", "--steps", "3", "--trials", "100"],
    ];
    for args in runs {
        let doc = cdg_json(args);
        let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
    let bogus = serde_json::json!({ "command": "evolve", "p": 101 });
    assert!(!validator.is_valid(&bogus));
}
