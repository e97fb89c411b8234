use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const P18: [&str; 8] = ["--tau-l", "1.8", "--delta-l", "0.4", "--tau-r", "-1.8", "--delta-r", "0.4"];
const OUTSIDE: [&str; 8] = ["--tau-l", "1.0", "--delta-l", "0.4", "--tau-r", "-1.8", "--delta-r", "0.4"];

fn bcnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcnf"))
        .args(args)
        .output()
        .expect("running bcnf")
}

fn with(cmd: &[&str], params: &[&str]) -> Vec<String> {
    cmd.iter().chain(params).map(|s| s.to_string()).collect()
}

fn run(cmd: &[&str], params: &[&str]) -> Output {
    let args = with(cmd, params);
    bcnf(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_reports_regime() {
    let out = run(&["classify"], &P18);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["regime"]["in_R"], true);
    assert_eq!(v["regime"]["thm2_applicable"], true);
    assert!((v["regime"]["phi"].as_f64().unwrap() - 0.042_262_5).abs() < 1e-6);
}

#[test]
fn outside_regime_is_not_an_error_for_classify_or_suite() {
    let out = run(&["classify"], &OUTSIDE);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["regime"]["in_R"], false);
    assert_eq!(run(&["suite"], &OUTSIDE).status.code(), Some(0));
}

#[test]
fn precondition_violation_is_invalid_input() {
    assert_eq!(run(&["trap"], &OUTSIDE).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(bcnf(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(bcnf(&["classify", "--tau-l", "1.8"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "--format", "csv"], &P18).status.code(), Some(3));
    assert_eq!(bcnf(&["--help"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_is_a_failed_check() {
    let out = run(&["witness", "--budget", "1"], &P18);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_io_error() {
    let out = run(&["classify", "--out", "/nonexistent/dir/x.json"], &P18);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"tau_L": 1.8, "delta_L": 0.4, "tau_R": -1.8, "delta_R": 0.4}"#).unwrap();
    let cfg = cfg.to_str().unwrap();

    let v = json(&bcnf(&["classify", "--config", cfg]));
    assert_eq!(v["params"]["tau_L"], 1.8);
    let v = json(&bcnf(&["classify", "--config", cfg, "--tau-l", "1.6"]));
    assert_eq!(v["params"]["tau_L"], 1.6);
    let direct = json(&bcnf(&["classify", "--tau-l", "1.6", "--delta-l", "0.4", "--tau-r", "-1.8", "--delta-r", "0.4"]));
    assert_eq!(v, direct);
}

#[test]
fn config_with_unknown_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"tau_l": 1.8}"#).unwrap();
    let out = run(&["classify", "--config", cfg.to_str().unwrap()], &P18);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn suite_passes_and_is_deterministic() {
    let a = run(&["suite", "--seed", "7"], &P18);
    let b = run(&["suite", "--seed", "7"], &P18);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["options"]["seed"], 7);
    assert!(v["certificates"]["cone"].get("elapsed_ms").is_none());
}

#[test]
fn scan_csv_has_one_row_per_cell() {
    let out = bcnf(&["scan", "--delta-l", "0.2", "--delta-r", "0.4", "--steps", "7", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("tau_L,tau_R,delta_L,delta_R,cond1,phi,in_R"));
    assert_eq!(lines.count(), 49);
}

fn files(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn figure_json_written_to_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figure", "fig1", "--out", dir.path().to_str().unwrap()], &P18);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(files(dir.path()), ["fig1.json"]);
    let v: Value = serde_json::from_slice(&std::fs::read(dir.path().join("fig1.json")).unwrap()).unwrap();
    assert_eq!(v["figure"], "fig1");
    assert!(!v["polylines"].as_array().unwrap().is_empty());
}

#[test]
fn figure_csv_split_by_table() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["figure", "fig3", "--format", "csv", "--max-period", "6", "--out", d], &P18);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(files(dir.path()), ["fig3_orbits.csv", "fig3_points.csv", "fig3_wu_x.csv"]);
    let orbits = std::fs::read_to_string(dir.path().join("fig3_orbits.csv")).unwrap();
    assert!(orbits.lines().count() > 1);
    assert!(!orbits.lines().skip(1).any(|l| l.starts_with("L,")));
}
