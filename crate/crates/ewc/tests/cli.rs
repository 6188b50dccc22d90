//! End-to-end checks of the command-line interface and its file formats.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ewc"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ewc-cli-{name}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_params(dir: &Path) -> PathBuf {
    let path = dir.join("params.json");
    fs::write(
        &path,
        r#"{"mu1": 0.5, "mu2": -1.2, "rho1": 0.7, "rho2": 0.4}"#,
    )
    .unwrap();
    path
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn scalar_subcommands_round_trip() {
    let dir = tmpdir("scalar");
    let params = write_params(&dir);
    let p = ewc::params::EwcParams::new(0.5, -1.2, 0.7, 0.4).unwrap();

    let out = bin()
        .args(["pdf", "--params", params.to_str().unwrap(), "--theta", "0.3"])
        .output()
        .unwrap();
    let pdf: f64 = stdout(&out).trim().parse().unwrap();
    assert_eq!(pdf, ewc::density::ewc_density(ewc::CircAngle::new(0.3), &p));

    let out = bin()
        .args(["cdf", "--params", params.to_str().unwrap(), "--theta", "0.3"])
        .output()
        .unwrap();
    let cdf: f64 = stdout(&out).trim().parse().unwrap();
    assert_eq!(cdf, ewc::interval::cdf(ewc::CircAngle::new(0.3), &p));

    let out = bin()
        .args([
            "prob",
            "--params",
            params.to_str().unwrap(),
            "--a",
            "-1.0",
            "--b",
            "0.3",
        ])
        .output()
        .unwrap();
    let prob: f64 = stdout(&out).trim().parse().unwrap();
    let direct = ewc::interval::interval_probability(
        ewc::CircAngle::new(-1.0),
        ewc::CircAngle::new(0.3),
        &p,
    )
    .unwrap();
    assert_eq!(prob, direct);
}

#[test]
fn moments_and_shape_emit_json() {
    let dir = tmpdir("json");
    let params = write_params(&dir);
    let out = bin()
        .args(["moments", "--params", params.to_str().unwrap()])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["moments"].as_array().unwrap().len(), 5);
    assert!(doc["mean_resultant_length"].as_f64().unwrap() > 0.0);

    let out = bin()
        .args(["shape", "--params", params.to_str().unwrap()])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["symmetric"], serde_json::Value::Bool(false));
    assert!(doc["classification"].is_string());
}

#[test]
fn sample_fit_round_trip_is_reproducible() {
    let dir = tmpdir("roundtrip");
    let params = write_params(&dir);
    let csv = dir.join("draws.csv");
    for _ in 0..2 {
        let out = bin()
            .args([
                "sample",
                "--params",
                params.to_str().unwrap(),
                "--n",
                "4000",
                "--seed",
                "7",
                "--out",
                csv.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        stdout(&out);
    }
    let body = fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("theta"));
    assert_eq!(lines.count(), 4000);
    let sidecar = dir.join("draws.meta.json");
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&sidecar).unwrap()).unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["method"], "rejection");

    let fit1 = stdout(
        &bin()
            .args(["fit", "--data", csv.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    let fit2 = stdout(
        &bin()
            .args(["fit", "--data", csv.to_str().unwrap()])
            .output()
            .unwrap(),
    );
    assert_eq!(fit1, fit2);
    let doc: serde_json::Value = serde_json::from_str(&fit1).unwrap();
    let est = &doc["params"];
    // canonical labels put the larger concentration first
    assert!(est["rho1"].as_f64().unwrap() >= est["rho2"].as_f64().unwrap());
    assert!((est["rho1"].as_f64().unwrap() - 0.7).abs() < 0.1);
}

#[test]
fn fit_accepts_degrees() {
    let dir = tmpdir("degrees");
    let csv = dir.join("deg.csv");
    let mut body = String::from("theta\n");
    for k in 0..400 {
        body.push_str(&format!("{}\n", (k % 360) as f64));
    }
    fs::write(&csv, body).unwrap();
    let out = bin()
        .args(["fit", "--data", csv.to_str().unwrap(), "--degrees", "--wc"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // nearly uniform data: tiny concentration
    assert!(doc["rho"].as_f64().unwrap() < 0.1);
}

#[test]
fn plotdata_emits_grid() {
    let dir = tmpdir("plot");
    let params = write_params(&dir);
    let out = bin()
        .args([
            "plotdata",
            "--params",
            params.to_str().unwrap(),
            "--n",
            "100",
        ])
        .output()
        .unwrap();
    let body = stdout(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("theta,density"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 100);
    let p = ewc::params::EwcParams::new(0.5, -1.2, 0.7, 0.4).unwrap();
    for &(t, d) in &rows {
        assert_eq!(d, ewc::density::ewc_density(ewc::CircAngle::new(t), &p));
    }
}

#[test]
fn sphere_subcommands() {
    let dir = tmpdir("sphere");
    let params = dir.join("sphere.json");
    fs::write(
        &params,
        r#"{"d": 3, "rho1": 0.5, "eta1": [0.0, 0.0, 1.0], "rho2": 0.3, "eta2": [1.0, 0.0, 0.0]}"#,
    )
    .unwrap();
    let out = bin()
        .args([
            "sphere-pdf",
            "--params",
            params.to_str().unwrap(),
            "--x",
            "0.0,1.0,0.0",
        ])
        .output()
        .unwrap();
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!(v > 0.0);

    let csv = dir.join("points.csv");
    let out = bin()
        .args([
            "sphere-sample",
            "--params",
            params.to_str().unwrap(),
            "--n",
            "500",
            "--seed",
            "3",
            "--out",
            csv.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    stdout(&out);
    let body = fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("x0,x1,x2"));
    for line in lines {
        let coords: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn exit_codes_distinguish_usage_and_numeric_errors() {
    let dir = tmpdir("errors");
    // unknown flag: usage error
    let out = bin().args(["pdf", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    // missing parameter file: usage error
    let out = bin()
        .args(["pdf", "--params", "/nonexistent.json", "--theta", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // malformed CSV reports the offending line
    let bad = dir.join("bad.csv");
    fs::write(&bad, "theta\n0.5\nnot-a-number\n").unwrap();
    let out = bin()
        .args(["fit", "--data", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3"));
    // well-formed request that fails numerically: empty interval
    let params = write_params(&dir);
    let out = bin()
        .args([
            "prob",
            "--params",
            params.to_str().unwrap(),
            "--a",
            "1.0",
            "--b",
            "0.5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_subcommand_reports_pass() {
    let out = bin().args(["verify", "--seed", "42"]).output().unwrap();
    let body = stdout(&out);
    assert!(body.lines().count() >= 10);
    for line in body.lines() {
        assert!(line.starts_with("PASS"), "{line}");
    }
}
