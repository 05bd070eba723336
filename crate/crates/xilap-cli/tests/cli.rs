use std::f64::consts::FRAC_PI_2;
use std::process::{Command, Output};

use serde_json::Value;

fn xilap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xilap"))
        .args(args)
        .env_remove("XILAP_SIEVE_BOUND")
        .env_remove("XILAP_PRECISION")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<f64>> {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("input_re,input_im,value_re,value_im,err_estimate"));
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn eval_h_grid_is_nonnegative() {
    let o = xilap(&["eval", "--fn", "H", "--beta", "0.25", "--grid", "0:30:300"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 300);
    assert!(rows.iter().all(|r| r.len() == 5 && r[2] >= 0.0));
    assert_eq!(rows[299][0], 30.0);
}

#[test]
fn eval_point_values() {
    let o = xilap(&["eval", "--fn", "m", "--beta", "0", "--points", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!((csv_rows(&o)[0][2] - FRAC_PI_2).abs() < 1e-15);
    let o = xilap(&["eval", "--fn", "P4w", "--w", "1", "--beta", "0.25", "--points", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_rows(&o)[0][2..4], [0.0, 0.0]);
}

#[test]
fn eval_json_and_complex_points() {
    let o = xilap(&["eval", "--fn", "gamma", "--points", "1+1i,0.5", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!((rows[0]["value_re"].as_f64().unwrap() - 0.498_015_668_118_356).abs() < 1e-14);
    assert!((rows[1]["value_re"].as_f64().unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
}

#[test]
fn eval_log_grid_and_output_file() {
    let path = std::env::temp_dir().join(format!("xilap-eval-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let o = xilap(&["eval", "--fn", "zeta", "--grid", "log:2:20:7", "--output", p, "--jobs", "3"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().nth(1).unwrap().starts_with("2,0,1.6449340668482"));
}

#[test]
fn eval_errors() {
    let o = xilap(&["eval", "--fn", "zeta", "--points", "0.5,1,2"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("zeta at 1"));
    assert_eq!(code(&xilap(&["eval", "--fn", "nosuch", "--points", "1"])), 2);
    assert_eq!(code(&xilap(&["eval", "--fn", "H", "--grid", "0:1:1"])), 2);
    assert_eq!(code(&xilap(&["eval", "--fn", "H"])), 2);
    assert_eq!(code(&xilap(&["eval", "--fn", "H", "--grid", "0:1:5", "--points", "1"])), 2);
}

#[test]
fn scan_examples() {
    let o = xilap(&["scan", "--kind", "monotone", "--fn", "P0", "--beta", "0.25", "--grid", "0:pi:1000"]);
    assert_eq!(code(&o), 0);
    let s = &json(&o)["scans"][0];
    assert_eq!(s["monotone"], true);
    assert_eq!(s["n_points"], 1000);

    let o = xilap(&["scan", "--kind", "positivity", "--fn", "T0ir", "--beta", "0.25", "--w", "1", "--grid", "1e-3:50:2000"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["scans"][0]["min"].as_f64().unwrap() > 0.0);

    let o = xilap(&["scan", "--kind", "growth", "--fn", "r2probe"]);
    assert_eq!(code(&o), 0);
    assert!((json(&o)["scans"][0]["exponent"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn failing_scans_exit_one() {
    let o = xilap(&["scan", "--kind", "monotone", "--fn", "decreasing", "--grid", "0:1:10"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["scans"][0]["pass"], false);
    let o = xilap(&["scan", "--kind", "growth", "--fn", "r2probe", "--expect", "3"]);
    assert_eq!(code(&o), 1);
    let o = xilap(&["scan", "--kind", "positivity", "--fn", "lk", "--k", "1", "--beta", "2", "--grid", "-10:10:200"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["scans"][0]["sign_changes"], 1);
}

#[test]
fn scan_config_errors() {
    assert_eq!(code(&xilap(&["scan", "--kind", "positivity", "--fn", "nosuch"])), 2);
    assert_eq!(code(&xilap(&["scan", "--kind", "growth", "--fn", "r2probe", "--grid", "1:2:10"])), 2);
    assert_eq!(code(&xilap(&["scan", "--kind", "positivity", "--fn", "H", "--beta", "1+1i"])), 2);
}

#[test]
fn scan_csv() {
    let o = xilap(&["scan", "--kind", "monotone", "--fn", "r2probe", "--grid", "0:2:5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&o);
    assert_eq!(rows.iter().map(|r| r[2]).collect::<Vec<_>>(), [0.0, 0.25, 1.0, 2.25, 4.0]);
}

#[test]
fn metric_examples() {
    let o = xilap(&["metric", "--x", "5", "--beta", "0.25", "--samples", "10000", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let m = &json(&o)["checks"][0]["metric"];
    assert_eq!(m["violations"], 0);
    assert_eq!(m["m0"], 0.0);

    let o = xilap(&["metric", "--x", "6", "--beta", "0", "--samples", "1000"]);
    assert_eq!(code(&o), 0);
    assert!(json(&o)["checks"][0]["metric"]["max_asymmetry"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn metric_excluded_points() {
    for x in ["4", "-4", "8", "3.5", "0"] {
        assert_eq!(code(&xilap(&["metric", "--x", x])), 2, "x = {x}");
    }
    assert_eq!(code(&xilap(&["metric", "--x", "5", "--beta", "-1"])), 2);
    assert_eq!(code(&xilap(&["metric"])), 2);
}

#[test]
fn verify_examples() {
    let o = xilap(&["verify", "--suite", "ID-14,ID-15,ID-16", "--tol", "default"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c["pass"] == true && c["n_samples"].as_u64().unwrap() >= 25));

    let o = xilap(&["verify", "--suite", "ID-21", "--beta", "0.25", "--w", "0"]);
    assert_eq!(code(&o), 0);
    let c = &json(&o)["checks"][0];
    assert_eq!(c["tolerance"], 1e-6);
    assert!(c["max_residual"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn verify_pinned_points() {
    let cases: [&[&str]; 3] = [
        &["verify", "--suite", "ID-16", "--point", "1.3+0.2i", "--beta", "0.25"],
        &["verify", "--suite", "ID-14", "--point", "1+1i", "--p", "0.6"],
        &["verify", "--suite", "ID-21", "--point", "2", "--beta", "0.25", "--w", "0"],
    ];
    for (args, tol) in cases.iter().zip([1e-9, 1e-9, 1e-6]) {
        let o = xilap(args);
        assert_eq!(code(&o), 0, "{args:?}");
        let c = &json(&o)["checks"][0];
        assert_eq!(c["n_samples"], 1);
        assert!(c["max_residual"].as_f64().unwrap() <= tol, "{args:?}");
    }
}

#[test]
fn verify_failures_and_config_errors() {
    let o = xilap(&["verify", "--suite", "ID-08", "--tol", "1e-30"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["checks"][0]["pass"], false);
    assert_eq!(code(&xilap(&["verify", "--suite", "ID-26"])), 2);
    assert_eq!(code(&xilap(&["verify", "--suite", "ID-08", "--samples", "3"])), 2);
    assert_eq!(code(&xilap(&["verify", "--suite", "ID-08", "--tol", "-1"])), 2);
    assert_eq!(code(&xilap(&["verify", "--suite", "ID-20", "--point", "4.1", "--beta", "0.25", "--w", "0"])), 2);
    assert_eq!(code(&xilap(&["verify", "--format", "csv"])), 2);
}

#[test]
fn verify_parallel_matches_serial() {
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("wall_ms");
        v["checks"].clone()
    };
    let a = xilap(&["verify", "--suite", "ID-08,ID-09,ID-13,ID-14,ID-16", "--jobs", "1"]);
    let b = xilap(&["verify", "--suite", "ID-08,ID-09,ID-13,ID-14,ID-16", "--jobs", "4"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn env_overrides_reach_the_config() {
    let o = Command::new(env!("CARGO_BIN_EXE_xilap"))
        .args(["eval", "--fn", "zeta", "--points", "2", "--format", "json"])
        .env("XILAP_SIEVE_BOUND", "1234")
        .env("XILAP_PRECISION", "extended")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let cfg = &json(&o)["config"];
    assert_eq!(cfg["sieve_bound"], 1234);
    assert_eq!(cfg["precision"], "extended");
    let o = Command::new(env!("CARGO_BIN_EXE_xilap"))
        .args(["eval", "--fn", "zeta", "--points", "2"])
        .env("XILAP_PRECISION", "quad")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&xilap(&["--help"])), 0);
    assert_eq!(code(&xilap(&["--version"])), 0);
    assert_eq!(code(&xilap(&["bogus"])), 2);
}
