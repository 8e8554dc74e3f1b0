use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn realclose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realclose")).arg("run").args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

const SWANSON: &[&str] = &["--model", "swanson", "--m", "1", "--omega", "3", "--c", "4", "--N", "64"];

#[test]
fn swanson_passes_every_check() {
    let out = realclose(&[SWANSON, &["--checks", "all"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["model", "classification", "eom", "counterpart", "similarity", "spectral", "tolerances", "versions"]);
    let ground = report["spectral"]["spectrum"]["lowest"][0][0].as_f64().unwrap();
    assert!((ground - 2.5).abs() < 1e-10);
    assert_eq!(report["spectral"]["exchange"], Value::Null);
}

#[test]
fn reports_are_byte_identical() {
    let args = [SWANSON, &["--checks", "spectrum,similarity"]].concat();
    assert_eq!(realclose(&args).stdout, realclose(&args).stdout);
}

#[test]
fn general_x_specialization_matches_swanson() {
    let sw = json(&realclose(&["--model", "swanson", "--m", "1", "--omega", "1", "--c", "1", "--checks", "all"]));
    let gx = json(&realclose(&[
        "--model", "general_x", "--m", "1", "--V", "1/2 x^2", "--series", "1", "--n", "1", "--checks", "all",
    ]));
    for key in ["classification", "eom", "counterpart", "similarity", "spectral"] {
        assert_eq!(sw[key], gx[key], "section {key}");
    }
}

#[test]
fn failing_check_exits_one() {
    let out = realclose(&[
        "--model", "custom", "--hamiltonian", "(1/2,0) p0^2 + (0,1) x0^3", "--variable", "x0", "--inertia", "1", "--order", "2",
        "--checks", "closure",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["eom"]["targets"][0]["real_closed"], Value::Bool(false));
}

#[test]
fn configuration_errors_exit_two() {
    let pu = realclose(&["--model", "pu_II", "--m", "1", "--a1", "2", "--a2", "1", "--a3", "3", "--checks", "closure"]);
    assert_eq!(pu.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&pu.stderr).contains("|a3| < |a1^2 - a2^2|"));

    let inapplicable = realclose(&["--model", "pu_I", "--gamma", "1", "--omega1", "2", "--omega2", "1", "--checks", "eta"]);
    assert_eq!(inapplicable.status.code(), Some(2));

    let float = realclose(&["--model", "swanson", "--m", "1.5", "--omega", "1", "--c", "1"]);
    assert_eq!(float.status.code(), Some(2));

    assert_eq!(realclose(&["--checks", "closure"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override_text_output_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let report = dir.path().join("report.txt");
    let csv = dir.path().join("spectrum.csv");
    fs::write(
        &config,
        r#"{"model": {"kind": "swanson", "m": "1", "omega": "1", "c": "1/2"},
            "basis": {"N": 32, "k": 4},
            "checks": ["spectrum"],
            "output": {"format": "json"}}"#,
    )
    .unwrap();
    let out = realclose(&[
        "--config", config.to_str().unwrap(), "--c", "1", "--format", "text",
        "--output", report.to_str().unwrap(), "--eigenvalues-csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let text = fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("[model]\n"));
    assert!(text.contains("spec.c"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("spectrum.passed") && l.ends_with("true")));

    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().filter(|l| !l.starts_with("index")).count(), 32);
}
