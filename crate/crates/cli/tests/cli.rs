use std::process::Command;

use collatz_lab::{transition_symbolic, ClassifiedInt, ResidueClass};
use collatz_lab_cli::{run, run_with, Hooks, EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_OK};
use proptest::prelude::*;
use serde_json::Value;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(args: &[&str]) -> Output {
    invoke_with(args, &Hooks::default())
}

fn invoke_with(args: &[&str], hooks: &Hooks) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("collatz-lab").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err, hooks);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let o = invoke(args);
    assert_eq!(o.code, EXIT_OK, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

// Bumps k of the image for one (class, parity of k) cell of the table.
fn corrupted<const CLASS: usize, const PARITY: u32>(c: &ClassifiedInt) -> ClassifiedInt {
    let mut image = transition_symbolic(c);
    let parity = u32::from(c.k.bit(0));
    if c.class == ResidueClass::ALL[CLASS] && parity == PARITY {
        image.k += 1u32;
    }
    image
}

type Table = fn(&ClassifiedInt) -> ClassifiedInt;

const CORRUPTED: [[Table; 2]; 4] = [
    [corrupted::<0, 0>, corrupted::<0, 1>],
    [corrupted::<1, 0>, corrupted::<1, 1>],
    [corrupted::<2, 0>, corrupted::<2, 1>],
    [corrupted::<3, 0>, corrupted::<3, 1>],
];

#[test]
fn classify_text() {
    let o = invoke(&["classify", "100"]);
    assert_eq!(o.code, EXIT_OK);
    assert_eq!(o.stdout.trim(), "100 = γ (k=24)");
}

#[test]
fn classify_json() {
    let v = json(&["--format", "json", "classify", "7"]);
    assert_eq!(v["class"], "eta");
    assert_eq!(v["k"], "1");
}

#[test]
fn classify_rejects_zero() {
    let o = invoke(&["classify", "0"]);
    assert_eq!(o.code, EXIT_ERROR);
    assert!(o.stderr.contains("error"));
}

#[test]
fn verify_transitions_million() {
    let v = json(&[
        "--format",
        "json",
        "verify",
        "transitions",
        "--max",
        "1000000",
    ]);
    assert_eq!(v["command"], "verify transitions");
    assert_eq!(v["checked"], "1000000");
    assert_eq!(v["counterexamples"], Value::Array(vec![]));
    assert_eq!(v["config"]["max"], "1000000");
}

#[test]
fn verify_other_targets_pass() {
    for target in ["beta-chain", "blocks", "polyline", "convergence"] {
        let o = invoke(&["verify", target, "--max", "2000"]);
        assert_eq!(o.code, EXIT_OK, "{target}: {}", o.stdout);
        assert!(o.stderr.contains(target));
    }
}

#[test]
fn corrupted_table_exits_two() {
    let hooks = Hooks {
        transition: CORRUPTED[0][1],
    };
    let o = invoke_with(
        &["--format", "json", "verify", "transitions", "--max", "1000"],
        &hooks,
    );
    assert_eq!(o.code, EXIT_COUNTEREXAMPLE);
    let v: Value = serde_json::from_str(&o.stdout).unwrap();
    let first = &v["counterexamples"][0];
    assert_eq!(first["input"], "5");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn any_corrupted_cell_is_caught(class in 0usize..4, parity in 0usize..2) {
        let hooks = Hooks { transition: CORRUPTED[class][parity] };
        let o = invoke_with(&["--format", "json", "verify", "transitions", "--max", "64"], &hooks);
        prop_assert_eq!(o.code, EXIT_COUNTEREXAMPLE);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        let expected_first = 4 * parity as u64 + ResidueClass::ALL[class].offset() as u64;
        prop_assert_eq!(&v["counterexamples"][0]["input"], &Value::String(expected_first.to_string()));
    }
}

#[test]
fn cycles_search_only_trivial() {
    let o = invoke(&["cycles", "search", "--n-max", "3", "--budget", "12"]);
    assert_eq!(o.code, EXIT_OK);
    let solutions: Vec<&str> = o.stdout.lines().filter(|l| l.contains("k0=")).collect();
    assert_eq!(solutions.len(), 3);
    assert!(solutions.iter().all(|l| l.contains("trivial")));
}

#[test]
fn usage_error_exits_one() {
    assert_eq!(invoke(&["bogus"]).code, EXIT_ERROR);
    assert_eq!(invoke(&["verify", "nothing"]).code, EXIT_ERROR);
    assert_eq!(
        invoke(&["--workers", "0", "classify", "3"]).code,
        EXIT_ERROR
    );
}

#[test]
fn help_exits_zero() {
    let o = invoke(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("Usage"));
}

#[test]
fn unwritable_out_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let o = invoke(&["--out", path.to_str().unwrap(), "classify", "5"]);
    assert_eq!(o.code, EXIT_ERROR);
}

#[test]
fn out_file_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let o = invoke(&[
        "--out",
        path.to_str().unwrap(),
        "--format",
        "csv",
        "verify",
        "transitions",
        "--max",
        "500",
    ]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, "input,expected,actual\n");
}

#[test]
fn worker_count_does_not_change_results() {
    let hooks = Hooks {
        transition: CORRUPTED[3][0],
    };
    let strip = |o: Output| -> Value {
        let mut v: Value = serde_json::from_str(&o.stdout).unwrap();
        v["elapsed_ms"] = Value::Null;
        v["config"]["workers"] = Value::Null;
        v
    };
    let base = [
        "--format",
        "json",
        "verify",
        "transitions",
        "--max",
        "20000",
    ];
    let one = invoke_with(&[&["--workers", "1"], &base[..]].concat(), &hooks);
    let three = invoke_with(&[&["--workers", "3"], &base[..]].concat(), &hooks);
    assert_eq!(one.code, EXIT_COUNTEREXAMPLE);
    assert_eq!(strip(one), strip(three));
}

#[test]
fn workers_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_collatz-lab"))
        .args(["--format", "json", "verify", "convergence", "--max", "1000"])
        .env("COLLATZ_LAB_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["workers"], "2");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_collatz-lab");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["classify", "9"]), Some(EXIT_OK));
    assert_eq!(status(&["classify", "nine"]), Some(EXIT_ERROR));
}

#[test]
fn trajectory_formats() {
    let v = json(&["--format", "json", "trajectory", "27"]);
    assert_eq!(v["steps"], "111");
    let o = invoke(&["--format", "csv", "trajectory", "6", "--map", "t"]);
    assert_eq!(o.code, EXIT_OK);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines[0], "step,value");
    assert_eq!(lines[1], "0,6");
    assert_eq!(lines.last().unwrap().split(',').nth(1), Some("1"));
}

#[test]
fn trajectory_limit_is_an_error() {
    let o = invoke(&["trajectory", "27", "--limit", "10"]);
    assert_eq!(o.code, EXIT_ERROR);
}

#[test]
fn polyline_text() {
    let o = invoke(&["polyline", "7"]);
    assert_eq!(o.stdout.trim(), "7 = (x=4, s=4) η");
}

#[test]
fn records_json() {
    let v = json(&["--format", "json", "records", "delay", "--max", "100"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 11);
    assert!(entries
        .iter()
        .any(|e| e["n"] == "27" && e["value"] == "111"));
}

#[test]
fn tree_csv() {
    let o = invoke(&["--format", "csv", "tree", "--depth", "5"]);
    assert_eq!(o.code, EXIT_OK);
    let rows = o.stdout.lines().count() - 1;
    // 1, 2, 4, 8, 16, then 32 and 5.
    assert_eq!(rows, 7);
}

#[test]
fn run_matches_run_with_default() {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut sink = Vec::new();
    run(["collatz-lab", "polyline", "12"], &mut a, &mut sink);
    run_with(
        ["collatz-lab", "polyline", "12"],
        &mut b,
        &mut sink,
        &Hooks::default(),
    );
    assert_eq!(a, b);
}
