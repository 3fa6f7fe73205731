use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const EXAMPLE: &str = r#"{"lead":[1,0],"roots":[[0.2,0.6],[-0.3,0.4],[0,-0.5],[0.7,-0.9]]}"#;
const SWEEP: &str = r#"{"degree":6,"root_disk":2.0,"radii":[1,3],"samples":12,"master_seed":4}"#;

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vblaschke"));
    cmd.args(args).env_remove("UNWIND_SEED");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn factor_prints_factorization_json() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", EXAMPLE);
    let out = run(&["factor", &poly, "--radius", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["b"]["captured"].as_array().unwrap().len(), 3);
    assert!(json["residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(json["g"]["coeffs"].as_array().unwrap().len(), 5);
}

#[test]
fn factor_accepts_coefficients() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", r#"{"coeffs":[[-0.25,0],[0,0],[1,0]]}"#);
    let out = run(&["factor", &poly, "--radius", "1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["b"]["captured"].as_array().unwrap().len(), 2);
}

#[test]
fn unwind_series_is_complete() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", EXAMPLE);
    for schedule in ["fixed:1", "minimal:1.5", "c615", "ostrowski"] {
        let out = run(&["unwind", &poly, "--schedule", schedule], &[]);
        assert_eq!(out.status.code(), Some(0), "{schedule}");
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(json["degrees"].as_array().unwrap().last().unwrap(), 0);
    }
}

#[test]
fn sweep_writes_csv_and_honours_seed_override() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "s.json", SWEEP);
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let out_c = dir.path().join("c.csv");
    for (path, seed) in [(&out_a, None), (&out_b, None), (&out_c, Some("99"))] {
        let envs: Vec<(&str, &str)> = seed.map(|s| ("UNWIND_SEED", s)).into_iter().collect();
        let out = run(
            &[
                "sweep",
                "--config",
                &config,
                "--out",
                path.to_str().unwrap(),
            ],
            &envs,
        );
        assert_eq!(out.status.code(), Some(0));
    }
    let read = |p: &Path| std::fs::read_to_string(p).unwrap();
    let csv = read(&out_a);
    assert_eq!(
        csv.lines().next(),
        Some("radius,L,mean_log_error,std_log_error,samples_ok,samples_failed")
    );
    assert_eq!(csv.lines().count(), 1 + 2 * 5);
    assert_eq!(csv, read(&out_b));
    assert_ne!(csv, read(&out_c));
}

#[test]
fn compare_taylor_appends_taylor_rows() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "s.json", SWEEP);
    let out = run(&["compare-taylor", "--config", &config], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 3 * 5);
    assert!(text.lines().last().unwrap().starts_with("0,5,"));
}

#[test]
fn m0_scan_prints_quadratic_threshold() {
    let out = run(&["m0-scan", "--n", "2", "--tol", "1e-9"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let m0: f64 = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((m0 - ((3f64.sqrt() - 1.0) / 2.0).sqrt()).abs() < 1e-8);
}

#[test]
fn verify_filter_reports_json() {
    let out = run(&["verify", "--filter", "contraction"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&String> = json.as_object().unwrap().keys().collect();
    assert_eq!(names.len(), 3);
    assert!(names.iter().all(|n| n.starts_with("contraction")));
}

#[test]
fn trace_prints_samples() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", EXAMPLE);
    let out = run(&["trace", &poly, "--radius", "1", "--samples", "8"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "0,1.0350000000000001,1.0050000000000001"
    );
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "p.json", EXAMPLE);
    let bad = write(&dir, "bad.json", r#"{"coeffs": "nope"}"#);
    let zero = write(
        &dir,
        "zero.json",
        r#"{"degree":0,"root_disk":1,"radii":[1],"samples":1,"master_seed":1}"#,
    );
    for args in [
        vec!["factor", poly.as_str(), "--radius", "-1"],
        vec!["factor", bad.as_str(), "--radius", "1"],
        vec!["factor", "/nonexistent.json", "--radius", "1"],
        vec!["unwind", poly.as_str(), "--schedule", "bogus"],
        vec!["sweep", "--config", zero.as_str()],
        vec!["m0-scan", "--n", "1"],
    ] {
        assert_eq!(run(&args, &[]).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(
        run(&["sweep", "--config", &poly], &[("UNWIND_SEED", "x")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn numerical_failure_exits_with_one() {
    let dir = TempDir::new().unwrap();
    // A root on the factorization circle.
    let poly = write(&dir, "p.json", r#"{"lead":[1,0],"roots":[[1,0]]}"#);
    assert_eq!(
        run(&["factor", &poly, "--radius", "1"], &[]).status.code(),
        Some(1)
    );
}
