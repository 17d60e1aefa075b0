use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelian")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn monodromy_of_t6() {
    let doc = run_json(&["monodromy", fixture("t6.json").to_str().unwrap()]);
    assert_eq!(doc["schema"], "abelian-cli/1");
    let r = &doc["result"];
    assert_eq!(r["group_order"], "12");
    assert_eq!(r["infinity"], serde_json::json!([2, 3, 4, 5, 6, 1]));
}

#[test]
fn monodromy_of_power_is_cyclic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(&dir, "x5.json", r#"{"polynomial": ["0", "0", "0", "0", "0", "1"]}"#);
    let doc = run_json(&["monodromy", &input]);
    assert_eq!(doc["result"]["group_order"], "5");
    assert_eq!(doc["result"]["generators"].as_array().unwrap().len(), 1);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let linear = write_temp(&dir, "lin.json", r#"{"polynomial": ["1", "2"]}"#);
    assert_eq!(run(&["monodromy", &linear]).status.code(), Some(2));
    let broken = write_temp(&dir, "broken.json", "{not json");
    assert_eq!(run(&["plot-constellation", &broken]).status.code(), Some(2));
    let unknown = write_temp(&dir, "extra.json", r#"{"polynomial": ["0", "0", "1"], "extra": 1}"#);
    assert_eq!(run(&["lattice", &unknown]).status.code(), Some(2));
    let short = write_temp(&dir, "short.json", r#"{"polynomial": ["0", "0", "1"], "cycle": ["1"]}"#);
    assert_eq!(run(&["analyze-cycle", &short]).status.code(), Some(2));
    assert_eq!(run(&["monodromy", "/nonexistent/input.json"]).status.code(), Some(2));
    assert_eq!(run(&["monodromy", fixture("t6.json").to_str().unwrap(), "--precision-bits", "16"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let path = fixture("t6_cycle.json");
    let a = run(&["solve", path.to_str().unwrap(), "--degree-bound", "6"]);
    let b = run(&["solve", path.to_str().unwrap(), "--degree-bound", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_temp(&dir, "cfg.json", r#"{"seed": 7, "samples": 3}"#);
    let doc = run_json(&["verify", fixture("t6_classify.json").to_str().unwrap(), "--seed", "1", "--config", &cfg]);
    assert_eq!(doc["config"]["seed"], 7);
    assert_eq!(doc["result"]["oracle"]["samples"], 3);
    let bad = write_temp(&dir, "bad.json", r#"{"sed": 7}"#);
    assert_eq!(run(&["verify", fixture("t6_classify.json").to_str().unwrap(), "--config", &bad]).status.code(), Some(2));
}

#[test]
fn solve_cycle_and_intervals_agree() {
    let by_cycle = run_json(&["solve", fixture("t6_cycle.json").to_str().unwrap(), "--degree-bound", "6"]);
    let by_interval = run_json(&["solve", fixture("t6_interval.json").to_str().unwrap(), "--degree-bound", "6"]);
    let basis = by_cycle["result"]["basis"]["elements"].as_array().unwrap();
    assert_eq!(basis.len(), 5);
    assert_eq!(by_interval["result"]["basis"]["elements"].as_array().unwrap().len(), 5);
    for r in by_cycle["result"]["residuals"].as_array().unwrap() {
        assert!(r.as_f64().unwrap() < 1e-20);
    }
}

#[test]
fn zero_cycle_gives_notice() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_temp(&dir, "zero.json", r#"{"polynomial": ["0", "0", "0", "1"], "cycle": ["0", "0", "0"]}"#);
    let doc = run_json(&["solve", &input, "--degree-bound", "4"]);
    assert!(doc["result"]["notice"].is_string());
    assert_eq!(doc["result"]["basis"]["elements"].as_array().unwrap().len(), 5);
}

#[test]
fn classify_and_verify_t6() {
    let doc = run_json(&["classify", fixture("t6_classify.json").to_str().unwrap()]);
    assert_eq!(doc["result"]["vanishes"], true);
    assert_eq!(doc["result"]["case"], "pullback-sum");
    let doc = run_json(&["verify", fixture("t6_classify.json").to_str().unwrap()]);
    assert_eq!(doc["result"]["exact"], true);
    assert_eq!(doc["result"]["puiseux"], true);
    assert_eq!(doc["result"]["oracle"]["vanishes"], true);
}

#[test]
fn hyperelliptic_commands() {
    let doc = run_json(&["hyper-check", fixture("oval_x.json").to_str().unwrap()]);
    assert_eq!(doc["result"]["report"]["witness"], serde_json::json!(["0", "0", "1"]));
    assert_eq!(doc["result"]["report"]["evidence"], "exact");
    let doc = run_json(&["hyper-integrate", fixture("oval_form.json").to_str().unwrap()]);
    assert_eq!(doc["result"]["values"].as_array().unwrap().len(), 4);
    assert!(doc["result"]["reduced_form"].is_object());
    let doc = run_json(&["main4-check", fixture("main4.json").to_str().unwrap()]);
    assert!(doc["result"]["max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn plots_count_stars_and_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t6.svg");
    let status = run(&["plot-constellation", fixture("t6.json").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert!(status.status.success());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<circle").count(), 6);
    assert_eq!(svg.matches("<line").count(), 12);
    assert_eq!(svg.matches("<rect x=").count(), 7);

    let cube = write_temp(&dir, "x3.json", r#"{"polynomial": ["0", "0", "0", "1"]}"#);
    let svg = String::from_utf8(run(&["plot-constellation", &cube]).stdout).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
    assert_eq!(svg.matches("<rect x=").count(), 1);
}
