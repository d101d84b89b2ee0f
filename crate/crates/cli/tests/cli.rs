use std::process::{Command, Output};

use ptbrach::protocol::REGIME_CSV_HEADER;
use ptbrach::pt::TRAJECTORY_CSV_HEADER;

fn ptbrach(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptbrach")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_csv_has_header_and_one_row() {
    let o = ptbrach(&["analyze", "--alpha", "-1.0471975511965976", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with(REGIME_CSV_HEADER));
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
}

#[test]
fn analyze_json_reports_speedup_three() {
    let o = ptbrach(&["analyze", "--alpha", "-1.0471975511965976", "--s", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tau = v["tau"].as_f64().unwrap();
    let tau_h = v["tau_h"].as_f64().unwrap();
    assert!((tau_h / tau - 3.0).abs() < 1e-12);
}

#[test]
fn sweep_emits_one_row_per_epsilon() {
    let o = ptbrach(&["sweep", "--omega0", "1", "--eps-grid", "0.3,0.1,0.03"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(REGIME_CSV_HEADER));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn trajectory_sample_count() {
    let o = ptbrach(&["trajectory", "--epsilon", "0.1", "--omega0", "1", "--n-samples", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some(TRAJECTORY_CSV_HEADER));
    assert_eq!(text.lines().count(), 18);
}

#[test]
fn dilate_json_has_all_blocks() {
    let o = ptbrach(&["dilate", "--alpha", "0.5", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["M", "V", "H4", "Lambda", "Omega", "E4"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["V"]["rows"], 4);
}

#[test]
fn dilate_rejects_csv() {
    assert_eq!(ptbrach(&["dilate", "--alpha", "0.5", "--s", "1", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["analyze", "--alpha", "1.6", "--s", "1"],
        &["analyze", "--alpha", "0.1"],
        &["analyze", "--alpha", "0.1", "--s", "1", "--epsilon", "0.2", "--omega0", "1"],
        &["analyze", "--epsilon", "0", "--omega0", "1"],
        &["analyze", "--alpha", "0.1", "--s", "-1"],
        &["analyze", "--alpha", "0.1", "--s", "1", "--tol", "0"],
        &["sweep", "--eps-grid", "0.1,2.0"],
        &["trajectory", "--alpha", "0.1", "--s", "1", "--n-samples", "1"],
        &["bogus"],
    ];
    for args in cases {
        assert_eq!(ptbrach(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let o = ptbrach(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("0 failed"));
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let args = ["sweep", "--eps-grid", "0.2,0.05"];
    let direct = ptbrach(&args);
    let mut with_file: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_file.extend(["-o", p]);
    assert_eq!(ptbrach(&with_file).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn hermitian_limit_times_coincide() {
    let o = ptbrach(&["analyze", "--alpha", "0", "--s", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let half_pi = std::f64::consts::FRAC_PI_2;
    assert!((v["tau"].as_f64().unwrap() - half_pi).abs() < 1e-12);
    assert!((v["tau_h"].as_f64().unwrap() - half_pi).abs() < 1e-12);
}

#[test]
fn epsilon_point_matches_regime_values() {
    let o = ptbrach(&["analyze", "--epsilon", "0.1", "--omega0", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["tau"].as_f64().unwrap() - 0.2).abs() < 1e-10);
    assert!((v["delta4"].as_f64().unwrap() - 0.2).abs() < 1e-10);
    assert!((v["p_success"].as_f64().unwrap() - 0.1f64.sin().powi(2) / 2.0).abs() < 1e-12);
}
