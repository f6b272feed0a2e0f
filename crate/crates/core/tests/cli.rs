use std::process::Command;

use triopoly::cli::{run_cli, EXIT_OK, EXIT_USAGE};

const BASE: [&str; 10] = ["--a", "10", "--b", "1/2", "--cA", "2", "--cB", "2", "--cC", "3"];

fn run(sub: &str, extra: &[&str]) -> (i32, String, String) {
    let argv: Vec<&str> = ["triopoly", sub].into_iter().chain(BASE).chain(extra.iter().copied()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn solve_csv_has_exact_cournot_row() {
    let (code, out, err) = run("solve", &["--format", "csv"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut rows = out.lines();
    assert!(rows.next().unwrap().starts_with("pattern,assignment,xA,xB,xC"));
    let first = rows.next().unwrap();
    assert!(first.starts_with("1,QQQ,114/35,114/35,94/35,"), "{first}");
    assert_eq!(rows.count(), 5);
}

#[test]
fn solve_json_is_valid() {
    let (code, out, _) = run("solve", &["--pattern", "PPP", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc[0]["x"][2], "166/65");
}

#[test]
fn verify_reports_equal_pairs() {
    let (code, out, _) = run("verify", &["--draws", "20", "--seed", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("equal pairs: {1,2} {4,6}"), "{out}");
    assert!(out.contains("pattern 1 xC: printed -94/35, corrected 94/35"));
    assert!(out.trim_end().ends_with("result: PASS"));
}

#[test]
fn minimax_at_equilibrium_passes() {
    let (code, out, err) = run("minimax", &["--firm", "A", "--fix", "xB=114/35", "--grid-points", "201"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("result: PASS"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let (code, _, err) = run("solve", &["--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--bogus"), "{err}");
}

#[test]
fn malformed_rational_is_a_usage_error() {
    let argv = ["triopoly", "solve", "--a", "1/0", "--b", "1/2", "--cA", "2", "--cB", "2", "--cC", "3"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(run_cli(argv, &mut out, &mut err), EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_triopoly");
    let ok = Command::new(bin).arg("solve").args(BASE).output().unwrap();
    assert!(ok.status.success());
    assert!(String::from_utf8_lossy(&ok.stdout).contains("94/35"));

    let bad = Command::new(bin).args(["solve", "--a", "10", "--b", "3/2", "--cA", "2", "--cB", "2", "--cC", "3"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert_eq!(String::from_utf8_lossy(&bad.stderr).trim(), "error: b must satisfy 0 < b < 1");
}
