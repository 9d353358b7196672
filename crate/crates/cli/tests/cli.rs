//! Behavior tests for the `curvlab` binary: subcommand output, the
//! definition-file round trip, exit codes, and machine-format stability.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curvlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("curvlab-cli-{}-{name}", std::process::id()));
    fs::write(&path, text).expect("scratch file written");
    path
}

#[test]
fn list_names_the_documented_entries() {
    let out = run(&["catalog", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    assert!(lines.len() >= 13, "catalog shrank to {} entries", lines.len());
    for name in ["sphere_4", "frw_s3", "sasakian_r5", "pp_wave_4"] {
        assert!(text.contains(name), "listing is missing {name}");
    }
}

#[test]
fn show_prints_expectations_with_provenance() {
    let out = run(&["catalog", "show", "sphere_4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("expected classification"));
    assert!(text.contains("einstein"));
    assert!(text.contains("closed form"), "each expectation must cite its derivation");
}

#[test]
fn export_round_trips_through_analyze() {
    let out = run(&["catalog", "export", "r3_flat"]);
    assert!(out.status.success());
    let path = scratch("roundtrip.metric", &stdout(&out));
    let reread = run(&[
        "analyze",
        path.to_str().unwrap(),
        "--points",
        "3",
    ]);
    let _ = fs::remove_file(&path);
    assert_eq!(reread.status.code(), Some(0), "stderr: {}", stderr(&reread));
    assert!(stdout(&reread).contains("flat"));
}

#[test]
fn machine_reports_parse_as_json() {
    let out = run(&["analyze", "catalog:r3_flat", "--points", "2", "--format", "machine"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["report_kind"], "analysis");
    assert!(v["tool"]["version"].is_string());
    assert!(v["classification"]["predicates"]["flat"]["verdict"].as_bool().unwrap());
    assert_eq!(v["run"]["seed"], 0);
}

#[test]
fn verification_reports_parse_as_json() {
    let out = run(&["verify-paper", "prop1.1", "--points", "4", "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["report_kind"], "verification");
    assert_eq!(v["passed"], true);
    assert!(v["assertions"].as_array().unwrap().len() >= 10);
}

#[test]
fn small_sweeps_are_byte_deterministic() {
    let args = ["analyze", "catalog:r3_flat", "--points", "3", "--format", "machine"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn missing_file_is_a_definition_error() {
    let out = run(&["analyze", "/no/such/file.metric"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn unknown_catalog_entry_is_a_definition_error() {
    let out = run(&["analyze", "catalog:nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope"));
}

#[test]
fn unknown_verification_target_is_a_definition_error() {
    let out = run(&["verify-paper", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope"));
}

#[test]
fn malformed_file_reports_the_offending_line() {
    let path = scratch(
        "broken.metric",
        "[metric]\nversion = 1\nname = broken\nkind = plain\ncoords = x, y\nsignature = ++\n\n[components]\ng_0_0 = sin(\ng_1_1 = 1\n\n[domain]\nx = -1 .. 1\ny = -1 .. 1\n",
    );
    let out = run(&["analyze", path.to_str().unwrap()]);
    let _ = fs::remove_file(&path);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 9"), "parse errors must locate the line, got: {err}");
}

#[test]
fn degenerate_metric_is_a_numeric_failure() {
    let path = scratch(
        "singular.metric",
        "[metric]\nversion = 1\nname = singular\nkind = plain\ncoords = x, y\nsignature = ++\n\n[components]\ng_0_0 = 1\ng_0_1 = 1\ng_1_1 = 1\n\n[domain]\nx = -1 .. 1\ny = -1 .. 1\n",
    );
    let out = run(&["analyze", path.to_str().unwrap()]);
    let _ = fs::remove_file(&path);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn tolerance_flags_feed_the_provenance_block() {
    let out = run(&[
        "analyze",
        "catalog:r3_flat",
        "--points",
        "2",
        "--tol-theorem",
        "1e-5",
        "--format",
        "machine",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let recorded = v["run"]["tolerance_source"].as_str().unwrap();
    assert!(recorded.contains("theorem:flag"), "flag precedence must be recorded, got {recorded}");
    assert!(recorded.contains("structural:default"), "untouched knobs stay default, got {recorded}");
    assert_eq!(v["run"]["tolerance_theorem"], 1e-5);
}
