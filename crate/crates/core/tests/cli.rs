use std::path::Path;
use std::process::{Command, Output};

use qes_locus::io::{read_plot_metadata, read_rows};

fn qes(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qes"));
    cmd.args(args).env_remove("QES_PRECISION");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("qes runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn poly_json_and_csv() {
    let o = qes(&["poly", "--J", "2"], &[]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["J"], 2);
    assert_eq!(v["vars"], serde_json::json!(["b", "lambda"]));
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);

    let o = qes(&["--format", "csv", "poly", "--J", "3"], &[]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("b_power,lambda_power,coefficient\n"));
    assert!(text.contains("\n0,0,16\n"));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(code(&qes(&["poly", "--J", "0"], &[])), 2);
    assert_eq!(code(&qes(&["poly"], &[])), 2);
    assert_eq!(code(&qes(&["nonsense"], &[])), 2);
    assert_eq!(
        code(&qes(&["trace", "--J", "3", "--b-min", "5", "--b-max", "1"], &[])),
        2
    );
    // The turning point at b = 3/4 lies outside this window.
    assert_eq!(
        code(&qes(&["trace", "--J", "3", "--b-min", "1", "--b-max", "5"], &[])),
        2
    );
    assert_eq!(code(&qes(&["beta", "--J", "1", "--b", "0"], &[])), 2);
    assert_eq!(code(&qes(&["plot", "--csv", "/nonexistent/trace.csv"], &[])), 2);
    assert_eq!(code(&qes(&["poly", "--J", "2"], &[("QES_PRECISION", "abc")])), 2);
    assert_eq!(code(&qes(&["poly", "--J", "2"], &[("QES_PRECISION", "12")])), 2);
}

#[test]
fn resource_limits_exit_three() {
    assert_eq!(code(&qes(&["poly", "--J", "100"], &[])), 3);
    assert_eq!(code(&qes(&["poly", "--J", "20", "--cap", "10"], &[])), 3);
}

#[test]
fn classify_point() {
    let o = qes(&["classify", "--J", "3", "--b", "0.75", "--lambda", "-4.5625"], &[]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(
        (v["n"].as_u64(), v["m"].as_u64(), v["n_real"].as_u64()),
        (Some(2), Some(1), Some(0))
    );
    assert_eq!(v["precision_bits"], 53);

    // The same point in the physics convention, at a precision from the environment.
    let o = qes(
        &["classify", "--J", "3", "--b", "0.75", "--lambda", "4.5625", "--phys"],
        &[("QES_PRECISION", "120")],
    );
    let v = json(&o);
    assert_eq!(v["m"], 1);
    assert_eq!(v["precision_bits"], 120);
}

#[test]
fn trace_plot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("j3.csv");
    let svg = dir.path().join("j3.svg");
    let o = qes(
        &[
            "trace",
            "--J",
            "3",
            "--b-min",
            "-5",
            "--b-max",
            "20",
            "--strict",
            "--out",
            p(&csv),
        ],
        &[],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows(std::fs::File::open(&csv).unwrap()).unwrap();
    let mut ms: Vec<usize> = rows.iter().map(|r| r.m).collect();
    ms.dedup();
    assert_eq!(ms, vec![0, 1]);
    assert!(rows.iter().all(|r| r.lambda_phys == -r.lambda && r.beta.is_none()));

    assert_eq!(code(&qes(&["plot", "--csv", p(&csv), "--out", p(&svg)], &[])), 0);
    let first = std::fs::read_to_string(&svg).unwrap();
    let meta = read_plot_metadata(&first).unwrap();
    assert_eq!(meta.components.len(), 2);
    assert_eq!(meta.components.iter().map(|c| c.points).sum::<usize>(), rows.len());

    // Same config, same bytes.
    assert_eq!(code(&qes(&["plot", "--csv", p(&csv), "--out", p(&svg)], &[])), 0);
    assert_eq!(std::fs::read_to_string(&svg).unwrap(), first);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("poly.json");
    std::fs::write(&cfg, format!("# J = 2 run\nJ = 2\nout = {}\n", p(&out))).unwrap();
    assert_eq!(code(&qes(&["--config", p(&cfg), "poly"], &[])), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["J"], 2);

    std::fs::write(&cfg, "J = 2\nshape = round\n").unwrap();
    assert_eq!(code(&qes(&["--config", p(&cfg), "poly"], &[])), 2);
}

#[test]
fn beta_point_and_conjugate() {
    let o = qes(&["beta", "--J", "1", "--b", "0", "--lambda", "0"], &[]);
    assert_eq!(code(&o), 0);
    let beta = json(&o)["result"]["beta"].as_f64().unwrap();
    assert!((beta - std::f64::consts::FRAC_PI_6).abs() < 1e-8);
    let o = qes(&["beta", "--J", "1", "--b", "0", "--lambda", "0", "--conjugate"], &[]);
    let conj = json(&o)["result"]["beta"].as_f64().unwrap();
    assert!((beta - conj).abs() < 1e-7);
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("verify.json");
    let o = qes(&["verify", "--J", "2", "--report", p(&report)], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["components", "zero_counts", "ends", "ordering", "beta", "trees"] {
        assert_eq!(v[key]["pass"], true, "{key}");
        assert!(v[key]["evidence"].is_array(), "{key}");
    }
}
