use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oh_core::funcspace::io::{read_csv, write_csv};
use oh_core::funcspace::GridFunction;
use oh_core::operators::Classical;
use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn oh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oh")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn quadratic_theorem_is_consistent_and_reproducible() {
    let cfg = config("quadratic.json");
    let a = oh(&["verify", "--config", &cfg, "--theorem", "2.1", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["verdict"], "consistent");
    assert_eq!(report["seed"], 11);
    let b = oh(&["verify", "--config", &cfg, "--theorem", "2.1", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn negative_configs_name_the_hypothesis() {
    let cases = [
        ("verify", "finite_iv.json", "2.1", "(Iv)(infinity) = infinity required"),
        ("verify", "exponential_table.json", "2.1", "Phi in Delta2 required"),
        ("verify", "order_violation.json", "2.1", "Phi precedes Psi required"),
        ("verify", "near_linear_power.json", "2.1", "complementary Phi in Delta2 required"),
        ("conditions", "conditions_finite_iv.json", "2.1", "(Iv)(infinity) = infinity required"),
        ("verify", "averaging_support.json", "C2.5", "supp(phi) subset of [1, infinity) required"),
    ];
    for (cmd, file, theorem, hypothesis) in cases {
        let out = oh(&[cmd, "--config", &config(&format!("negative/{file}")), "--theorem", theorem]);
        assert_eq!(out.status.code(), Some(1), "{file}: {}", stderr(&out));
        assert!(stderr(&out).contains(hypothesis), "{file}: {}", stderr(&out));
    }
}

#[test]
fn malformed_json_exits_3() {
    let bad = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/malformed.json");
    let out = oh(&["verify", "--config", bad.to_str().unwrap(), "--theorem", "2.1"]);
    assert_eq!(out.status.code(), Some(3));
    let missing = oh(&["norm", "--config", "/nonexistent/config.json", "--function", "f"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn unknown_theorem_is_a_config_error() {
    let out = oh(&["verify", "--config", &config("quadratic.json"), "--theorem", "9.9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn op_apply_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let output = dir.path().join("out.csv");
    let f = GridFunction::new(vec![0.1, 0.5, 2.0, 7.0], vec![3.0, 2.0, 0.7, 0.2]).unwrap();
    write_csv(&f, &input).unwrap();
    let out = oh(&["op", "apply", "--op", "hardy", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let read = read_csv(&output).unwrap();
    let direct = Classical::HardyAvg.apply(&read_csv(&input).unwrap(), None).unwrap();
    assert_eq!(read.xs().len(), direct.xs().len());
    for (a, b) in read.ys().iter().zip(direct.ys()) {
        assert!((a - b).abs() <= 1e-11 * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn dunkl_needs_a_multiplier() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    write_csv(&GridFunction::indicator(0.0, 1.0, 1.0).unwrap(), &input).unwrap();
    let out = oh(&["op", "apply", "--op", "dunkl", "--input", input.to_str().unwrap(), "--output", "/dev/null"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn norm_of_indicator() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("norms.jsonl");
    let out = oh(&["norm", "--config", &config("quadratic.json"), "--function", "chi01", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let value: f64 = text.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((value - 0.5f64.sqrt()).abs() < 1e-10);
    let line: Value = serde_json::from_str(std::fs::read_to_string(&report).unwrap().trim()).unwrap();
    assert_eq!(line["function"], "chi01");
}

#[test]
fn conditions_table_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = oh(&["conditions", "--config", &config("hardy.json"), "--theorem", "C2.5", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let conditions = summary["conditions"].as_array().unwrap();
    assert_eq!(conditions.len(), 2);
    for c in conditions {
        let m = c["minimal_constant"].as_f64().unwrap();
        assert!((m - 0.5).abs() < 5e-3, "{m}");
    }
    let lines = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(lines, 1 + 2 * 36);
}

#[test]
fn duality_tables() {
    for which in ["plain", "sawyer"] {
        let out = oh(&["duality", "--config", &config("quadratic.json"), "--which", which, "--function", "chi01"]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
    }
}

#[test]
fn nfunc_check_reports_the_pair() {
    let out = oh(&["nfunc", "check", "--config", &config("quadratic.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["failed"].is_null());
    let bad = oh(&["nfunc", "check", "--config", &config("negative/order_violation.json")]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn thread_cap_is_validated() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_oh"))
            .env("OH_THREADS", threads)
            .args(["norm", "--config", &config("quadratic.json"), "--function", "chi01"])
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("zero").status.code(), Some(3));
}
