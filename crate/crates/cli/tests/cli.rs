use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monodromy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn last(out: &Output) -> Value {
    lines(out).pop().expect("some output")
}

fn strip_timing(mut v: Vec<Value>) -> Vec<Value> {
    for x in &mut v {
        x.as_object_mut().unwrap().remove("timing_ms");
    }
    v
}

#[test]
fn vp_value() {
    let out = run(&["vp", "2", "1/7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = last(&out);
    assert_eq!(v["command"], "vp");
    assert_eq!(v["result"]["v"]["exact"], "1/3");
}

#[test]
fn vp_rejects_p_in_denominator() {
    let out = run(&["vp", "2", "1/6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn w_reports_violation_with_exit_zero() {
    let out = run(&["w", "5", "1", "6", "7/24", "1/24"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &last(&out)["result"];
    assert_eq!(r["w_value"], "11/8");
    assert_eq!(r["verdict"], "violation");
}

#[test]
fn belyi_search_finds_level_one_witness() {
    let out = run(&["belyi", "--p", "7", "--d", "2", "--e", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let w = &last(&out)["result"]["witness"];
    assert_eq!(w["w_value"], "4/3");
    assert_eq!(w["level"], 1);
}

#[test]
fn builtin_witnesses_verify() {
    let out = run(&["verify-witnesses"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &last(&out)["result"]["summary"];
    assert_eq!(s["rows"], 42);
    assert_eq!(s["mismatches"], 0);
}

#[test]
fn tampered_witness_table_fails() {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/tampered_witnesses.txt"
    );
    let out = run(&["verify-witnesses", "--table", path]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(last(&out)["result"]["summary"]["mismatches"], 1);
}

#[test]
fn missing_table_is_usage_error() {
    let out = run(&["verify-witnesses", "--table", "/nonexistent/table.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_and_bad_prime() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["vp", "4", "1/3"]).status.code(), Some(2));
    assert_eq!(
        run(&["belyi", "--p", "2", "--d", "0", "--e", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn catalog_rows() {
    let out = run(&["catalog", "--p", "7", "--max", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = lines(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["result"]["A"], 1);
    assert_eq!(rows[0]["result"]["B"], 1);
}

#[test]
fn crosscheck_is_consistent() {
    let out = run(&["crosscheck", "--p", "7", "--max", "5", "--max-r", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &last(&out)["result"]["summary"];
    assert_eq!(s["consistent"], 1);
    assert_eq!(s["violated"], 2);
}

#[test]
fn small_charsum_suite_passes() {
    let out = run(&["charsums", "--max-q", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(last(&out)["result"]["summary"]["failures"], 0);
}

#[test]
fn output_is_deterministic_modulo_timing() {
    let args = [
        "catalog",
        "--p",
        "2",
        "--max",
        "20",
        "--theorem",
        "candidates",
    ];
    let a = strip_timing(lines(&run(&args)));
    let b = strip_timing(lines(&run(&args)));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}
