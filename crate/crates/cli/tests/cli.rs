use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn graphonlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphonlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn constants_prints_sigma_for_two_block() {
    let dir = tempfile::tempdir().unwrap();
    let k12 = write(dir.path(), "k12.json", r#"{"n": 3, "edges": [[1, 2], [1, 3]]}"#);
    let out = graphonlab(&["constants", "--pattern", &k12, "--kernel", "two_block:0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "sigma2 = 0.015625"), "{text}");
    assert!(text.contains("branch = mixture"));
    assert!(text.contains("spec_minus = ["));
}

#[test]
fn density_of_an_edge_in_a_constant_graphon() {
    let dir = tempfile::tempdir().unwrap();
    let k2 = write(dir.path(), "k2.json", r#"{"n": 2, "edges": [[1, 2]]}"#);
    let out = graphonlab(&["density", "--pattern", &k2, "--kernel", "constant:0.3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "0.3");

    let double = write(
        dir.path(),
        "k2x2.json",
        r#"{"n": 2, "edges": [[1, 2]], "mult": [2]}"#,
    );
    let out = graphonlab(&["density", "--pattern", &double, "--kernel", "constant:0.5"]);
    assert_eq!(stdout(&out).trim(), "0.25");
}

#[test]
fn kernel_may_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = write(
        dir.path(),
        "w.json",
        r#"{"pi": [0.5, 0.5], "B": [[0.4, 0.0], [0.0, 0.4]]}"#,
    );
    let out = graphonlab(&["regularity", "--pattern", "k12", "--kernel", &kernel]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict = regular"));
    let out = graphonlab(&[
        "regularity",
        "--pattern",
        "k12",
        "--kernel",
        "product",
        "--m",
        "32",
    ]);
    assert!(stdout(&out).contains("verdict = not regular"));
}

#[test]
fn spectrum_prints_json() {
    let out = graphonlab(&["spectrum", "--pattern", "k12", "--kernel", "two_block:0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let eig: Vec<f64> = serde_json::from_value(v["eigenvalues"].clone()).unwrap();
    assert_eq!(eig.len(), 2);
    assert!(eig.iter().all(|l| (l - 3.0 / 32.0).abs() < 1e-12));
    assert_eq!(v["pi"].as_array().unwrap().len(), 2);
}

#[test]
fn simulate_writes_result_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "exp.json",
        r#"{
            "schema_version": 1,
            "pattern": {"n": 3, "edges": [[1, 2], [1, 3]]},
            "kernel": {"kind": "two_block", "p": 0.5},
            "n": 60,
            "replicates": 400,
            "reference_draws": 20000,
            "master_seed": 7,
            "tolerances": {"ks_threshold": 0.2}
        }"#,
    );
    let out_dir = dir.path().join("results");
    let out = graphonlab(&[
        "simulate",
        "--config",
        &config,
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let result: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("result.json")).unwrap()).unwrap();
    assert_eq!(result["schema_version"], 1);
    assert_eq!(result["passed"], true);
    let csv = fs::read_to_string(out_dir.join("replicates.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("replicate,seed,raw_count,normalized"));
    assert_eq!(csv.lines().count(), 401);
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "exp.json",
        r#"{
            "schema_version": 1,
            "pattern": {"n": 3, "edges": [[1, 2], [1, 3]]},
            "kernel": {"kind": "product"},
            "discretization": 16,
            "n": 30,
            "replicates": 50,
            "reference_draws": 1000,
            "master_seed": 7,
            "tolerances": {"ks_threshold": 0.0}
        }"#,
    );
    let out = graphonlab(&[
        "simulate",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let out = graphonlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"schema_version": 9}"#);
    let out = graphonlab(&[
        "simulate",
        "--config",
        &bad,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = graphonlab(&["constants", "--pattern", "k3", "--kernel", "constant:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));

    let out = graphonlab(&["density", "--pattern", "k2", "--kernel", "constant:1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = graphonlab(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("FAIL"));
}
