use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lrhsr::io::fmt_f64;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

fn lrhsr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrhsr")).args(args).output().expect("binary runs")
}

fn run_config(dir: &Path, name: &str, text: &str, extra: &[&str]) -> Output {
    let path = dir.join(format!("{name}.toml"));
    fs::write(&path, text).unwrap();
    let out = dir.join(name);
    let mut args = vec!["--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    lrhsr(&args)
}

fn model(kind: &str, alpha: f64, gamma: f64, n: usize, bc: &str) -> String {
    format!("kind = \"{kind}\"\n\n[model]\nd = 1\nalpha = {alpha:?}\nJ = 1.0\ngamma = {gamma:?}\nN = {n}\nbc = \"{bc}\"\n\n[run]\n")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let k = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[k].parse().unwrap()).collect()
}

/// Every float field re-formats to the same text; integer fields stay integers.
fn assert_lossless(path: &Path) {
    let (header, rows) = read_csv(path);
    for row in &rows {
        assert_eq!(row.len(), header.len(), "{}", path.display());
        for field in row {
            if field.parse::<i64>().is_ok() {
                continue;
            }
            match field.parse::<f64>() {
                Ok(x) => assert!(x.is_nan() || fmt_f64(x) == *field, "{field}"),
                Err(_) => assert!(field.chars().all(|c| c.is_ascii_lowercase()), "{field}"),
            }
        }
    }
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn check_manifest(dir: &Path) {
    let m = manifest(dir);
    assert_eq!(m["schema_version"], 1);
    for a in m["artifacts"].as_array().unwrap() {
        let bytes = fs::read(dir.join(a["name"].as_str().unwrap())).unwrap();
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(a["sha256"].as_str().unwrap(), hex);
        assert_eq!(a["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
}

fn csv_artifacts(dir: &Path) -> Vec<String> {
    let m = manifest(dir);
    m["artifacts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap().to_string())
        .filter(|n| n.ends_with(".csv"))
        .collect()
}

#[test]
fn analytic_report_table() {
    let tmp = TempDir::new().unwrap();
    let text = model("analytic-report", 2.0, 10.0, 64, "periodic") + "dims = [1, 2, 3]\nalphas = [2.0, 3.0]\n";
    let out = run_config(tmp.path(), "report", &text, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("report");
    check_manifest(&dir);
    assert_lossless(&dir.join("coefficients.csv"));
    let (h, rows) = read_csv(&dir.join("coefficients.csv"));
    let d = column(&h, &rows, "D_over_kappa");
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((d[0] - pi2 / 6.0).abs() < 1e-12);
    assert!((d[1] - pi2 * pi2 / 90.0).abs() < 1e-12);
    let report = fs::read_to_string(dir.join("report.txt")).unwrap();
    assert!(report.contains("alpha_cr = 2.5"));
    assert!(report.contains("forster_ratio = 2.755"));
}

#[test]
fn classical_profile_roundtrip_and_fit() {
    let tmp = TempDir::new().unwrap();
    let text = model("classical-profile", 1.0, 10.0, 400, "periodic") + "kappa_times = [1.0]\nfit_window = [10.0, 100.0]\n";
    let out = run_config(tmp.path(), "prof", &text, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("prof");
    check_manifest(&dir);
    for name in csv_artifacts(&dir) {
        assert_lossless(&dir.join(name));
    }
    let (h, rows) = read_csv(&dir.join("profile.csv"));
    assert_eq!(h, ["t", "j1", "n"]);
    let total: f64 = column(&h, &rows, "n").iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
    let (h, rows) = read_csv(&dir.join("tails.csv"));
    let e = column(&h, &rows, "exponent")[0];
    assert!((e + 2.0).abs() < 0.1, "{e}");
}

#[test]
fn moments_grow_linearly_in_mixed_regime() {
    let tmp = TempDir::new().unwrap();
    let text = model("classical-moments", 3.0, 10.0, 256, "periodic") + "t_max = 10.0\npoints = 4\n";
    let out = run_config(tmp.path(), "mom", &text, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("mom");
    assert_lossless(&dir.join("moments.csv"));
    let (h, rows) = read_csv(&dir.join("moments.csv"));
    let v = column(&h, &rows, "variance");
    let t = column(&h, &rows, "t");
    assert_eq!(v.len(), 5);
    let expect = 2.0 * 0.2 * std::f64::consts::PI.powi(4) / 90.0;
    assert!(((v[4] - v[2]) / (t[4] - t[2]) / expect - 1.0).abs() < 1e-3);
}

#[test]
fn quantum_variance_columns() {
    let tmp = TempDir::new().unwrap();
    let text = model("quantum-variance", 3.0, 10.0, 21, "open") + "t_max = 0.5\npoints = 10\n";
    let out = run_config(tmp.path(), "qv", &text, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("qv");
    check_manifest(&dir);
    let (h, rows) = read_csv(&dir.join("variance.csv"));
    assert_eq!(h, ["alpha", "N", "t", "qme", "eq3", "classical"]);
    let (qme, eq3) = (column(&h, &rows, "qme"), column(&h, &rows, "eq3"));
    assert_eq!(qme.len(), 11);
    for (a, b) in qme.iter().zip(&eq3) {
        assert!((a - b).abs() < 1e-6, "{a} {b}");
    }
    assert_lossless(&dir.join("density.csv"));
}

#[test]
fn spectrum_tables() {
    let tmp = TempDir::new().unwrap();
    let text = model("spectrum", 2.0, 0.1, 11, "periodic") + "sizes = [11, 15]\n";
    let out = run_config(tmp.path(), "spec", &text, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("spec");
    check_manifest(&dir);
    let (_, rows) = read_csv(&dir.join("spectrum_a2_N11.csv"));
    assert_eq!(rows.len(), 121);
    let (h, rows) = read_csv(&dir.join("gaps.csv"));
    assert_eq!(column(&h, &rows, "N"), [11.0, 15.0]);
    assert!(fs::read_to_string(dir.join("gap_fit.txt")).unwrap().contains("exponent = "));
}

#[test]
fn kmc_reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let text = model("manybody-relax", 2.0, 10.0, 16, "open") + "kappa_times = [0.5, 1.0]\ntrajectories = 300\nseed = 42\n";
    let a = run_config(tmp.path(), "a", &text, &[]);
    let b = run_config(tmp.path(), "b", &text, &[]);
    let c = run_config(tmp.path(), "c", &text, &["--seed", "43"]);
    for o in [&a, &b, &c] {
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (da, db, dc) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    let names = csv_artifacts(&da);
    assert_eq!(names, ["occupation.csv", "ensemble.csv"]);
    for name in &names {
        assert_eq!(fs::read(da.join(name)).unwrap(), fs::read(db.join(name)).unwrap(), "{name}");
        assert_lossless(&da.join(name));
    }
    assert_ne!(fs::read(da.join("ensemble.csv")).unwrap(), fs::read(dc.join("ensemble.csv")).unwrap());
    assert_eq!(manifest(&dc)["config"]["run"]["seed"], 43);
}

#[test]
fn relaxation_fit_summary() {
    let tmp = TempDir::new().unwrap();
    let text = model("manybody-relax", 3.0, 10.0, 40, "open") + "sizes = [40, 60, 80, 100]\npoints = 200\n";
    let out = run_config(tmp.path(), "fit", &text, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let fit = fs::read_to_string(tmp.path().join("fit/fit.txt")).unwrap();
    let beta: f64 = fit
        .lines()
        .find_map(|l| l.strip_prefix("beta = "))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((beta - 2.0).abs() < 0.2, "{fit}");
}

#[test]
fn config_errors_exit_2() {
    let tmp = TempDir::new().unwrap();
    let text = model("spectrum", 2.0, 0.1, 11, "periodic") + "sizez = [11]\n";
    let out = run_config(tmp.path(), "typo", &text, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sizez"));

    let text = model("spectrum", 2.0, 0.1, 12, "periodic");
    let out = run_config(tmp.path(), "even", &text, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd N"));

    assert_eq!(lrhsr(&["--preset", "nope"]).status.code(), Some(2));
    assert_eq!(lrhsr(&[]).status.code(), Some(2));
    assert_eq!(lrhsr(&["--preset", "fig1c", "--bc", "closed"]).status.code(), Some(2));
    assert!(!tmp.path().join("typo").exists());
}

#[test]
fn solver_errors_exit_3() {
    let tmp = TempDir::new().unwrap();
    let text = model("classical-profile", 2.0, 10.0, 64, "periodic") + "kappa_times = [1.0]\nfit_window = [500.0, 900.0]\n";
    let out = run_config(tmp.path(), "fit", &text, &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn presets_resolve_with_overrides() {
    let list = lrhsr(&["--list-presets"]);
    let text = String::from_utf8(list.stdout).unwrap();
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "figS1", "figS2", "figS3", "figS4"]);
    for name in names {
        let out = lrhsr(&["--preset", name, "--print-config"]);
        assert!(out.status.success(), "{name}");
    }
    let out = lrhsr(&["--preset", "fig2a", "--N", "32", "--alpha", "1.5", "--trajectories", "7", "--print-config"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N = 32") && text.contains("alpha = 1.5") && text.contains("trajectories = 7"), "{text}");
    assert!(!text.contains("alphas"));
}
