use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dirac_bounds::cli::{load_domain, CSV_COLUMNS};
use dirac_bounds::geometry::{DomainSpec, Shape};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dirac-bounds"))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn column(header: &str, row: &str, name: &str) -> String {
    let idx = header.split(',').position(|c| c == name).unwrap();
    row.split(',').nth(idx).unwrap().to_string()
}

#[test]
fn loads_the_documented_schema() {
    let dir = TempDir::new().unwrap();
    let disk = write(
        dir.path(),
        "disk.json",
        r#"{"shape":{"kind":"disk","radius":1.0},"offset":[0,0]}"#,
    );
    assert_eq!(load_domain(&disk).unwrap(), DomainSpec::disk(1.0).unwrap());

    let ellipse = write(
        dir.path(),
        "ellipse.json",
        r#"{"shape":{"kind":"ellipse","a":1.5,"b":0.75},"offset":[0,0]}"#,
    );
    assert_eq!(
        load_domain(&ellipse).unwrap().shape,
        Shape::Ellipse { a: 1.5, b: 0.75 }
    );

    let trefoil = write(
        dir.path(),
        "trefoil.json",
        r#"{"shape":{"kind":"polar_fourier","a0":1.0,"cos":[0,0,0.1],"sin":[]},"offset":[0,0]}"#,
    );
    let spec = load_domain(&trefoil).unwrap();
    assert_eq!(spec.boundary_point(0.0), [1.1, 0.0]);
}

#[test]
fn schema_errors_name_the_problem() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (
            r#"{"shape":{"kind":"ellipse","a":1.5}}"#,
            "missing field `b`",
        ),
        (r#"{"shape":{"kind":"square","side":1}}"#, "unknown variant"),
        (
            r#"{"shape":{"kind":"disk","radius":1.0,"extra":2}}"#,
            "unknown field",
        ),
        (
            r#"{"shape":{"kind":"disk","radius":1.0},"offset":[2,0]}"#,
            "origin",
        ),
        (
            r#"{"shape":{"kind":"polar_fourier","a0":1.0,"cos":[0,0,1.2]}}"#,
            "polar radius is not positive",
        ),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("bad{i}.json"), body);
        let err = format!("{:#}", load_domain(&path).unwrap_err());
        assert!(err.contains(needle), "{body}: {err}");
    }
    assert!(load_domain(&dir.path().join("missing.json")).is_err());
}

#[test]
fn analyze_shifted_disk_csv() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "shift.json",
        r#"{"shape":{"kind":"disk","radius":1.0},"offset":[0.5,0]}"#,
    );
    let out = dir.path().join("report.csv");
    let o = run(&[
        "analyze",
        input.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("2.40482555770e0") && stderr.contains("1.5508"));

    let text = fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_COLUMNS.join(","));
    let fc: f64 = column(lines[0], lines[1], "fc").parse().unwrap();
    assert!((fc - 0.125 * 2.5f64.sqrt()).abs() < 1e-10);
    assert_eq!(column(lines[0], lines[1], "param"), "");
    assert_eq!(column(lines[0], lines[1], "chain_ok"), "true");
}

#[test]
fn analyze_json_is_deterministic_and_complete() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "e.json",
        r#"{"shape":{"kind":"ellipse","a":1.2,"b":0.8333333333333334}}"#,
    );
    let a = run(&["analyze", input.to_str().unwrap()]);
    let b = run(&["analyze", input.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let report = &v["report"];
    for key in ["n1", "n2", "n3", "d", "bound"] {
        assert!(report["transplant"][key].is_number(), "{key}");
    }
    for key in [
        "area",
        "r_i",
        "r_o",
        "r_c",
        "kappa_star",
        "rho_star",
        "inradius",
    ] {
        assert!(report["geometry"][key].is_number(), "{key}");
    }
    for key in [
        "lower",
        "easy",
        "abstract",
        "kovalev_hardy",
        "gaier_hardy",
        "fc",
        "fs",
    ] {
        assert!(report[key].is_number(), "{key}");
    }
    assert!(report["links"]
        .as_array()
        .unwrap()
        .iter()
        .all(|l| l["margin"].as_f64().unwrap() > 1e-6));
    assert_eq!(v["lambda_audit"]["discrepancy"], true);
    assert_eq!(v["lambda_audit"]["j01"].as_f64().unwrap(), 2.4048255577);
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let disk = write(
        dir.path(),
        "disk.json",
        r#"{"shape":{"kind":"disk","radius":1.0},"offset":[0,0]}"#,
    );
    let o = run(&["verify", disk.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ok"], true);
    let links = v["domains"][0]["report"]["links"].as_array().unwrap();
    for link in links.iter().filter(|l| l["relation"] == "equal") {
        assert!(link["margin"].as_f64().unwrap().abs() <= 1e-7, "{link}");
    }
    assert_eq!(links.iter().filter(|l| l["relation"] == "equal").count(), 5);

    let bad = write(
        dir.path(),
        "outside.json",
        r#"{"shape":{"kind":"disk","radius":1.0},"offset":[1.5,0]}"#,
    );
    let o = run(&["verify", disk.to_str().unwrap(), bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));

    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(
        run(&["analyze", "x.json", "--bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn ellipse_sweep_csv() {
    let o = run(&[
        "sweep", "--family", "ellipse", "--param", "x", "--from", "0.01", "--to", "1.0", "--steps",
        "20",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 21);
    let header = lines[0];
    assert_eq!(header, CSV_COLUMNS.join(","));

    let params: Vec<f64> = lines[1..]
        .iter()
        .map(|r| column(header, r, "param").parse().unwrap())
        .collect();
    assert_eq!(params[0], 0.01);
    assert_eq!(params[19], 1.0);
    assert!(params.windows(2).all(|w| w[0] < w[1]));

    let fc: Vec<f64> = lines[1..]
        .iter()
        .map(|r| column(header, r, "fc").parse().unwrap())
        .collect();
    assert!(fc.windows(2).all(|w| w[1] < w[0]), "{fc:?}");
    for (x, f) in params.iter().zip(&fc) {
        let closed = ((2.0 + 2.0 * x + x * x) / (2.0 + 4.0 * x + 2.0 * x * x)).sqrt()
            * (1.0 / (1.0 + x)).powf(8.0 + 8.0 * x + 4.0 * x * x);
        assert!((f - closed).abs() <= 1e-10 * closed, "{x}: {f} vs {closed}");
    }
    assert!(lines[1..]
        .iter()
        .all(|r| column(header, r, "chain_ok") == "true"));
}

#[test]
fn disk_spectrum_json() {
    let o = run(&[
        "disk-spectrum",
        "--radius",
        "2",
        "--kmax",
        "2",
        "--per-fiber",
        "2",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let principal = v["principal"].as_f64().unwrap();
    assert!((principal - 1.434696 / 2.0).abs() < 1e-5);
    let pairs = v["eigenpairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2 * 6 * 2);
    assert!(pairs
        .iter()
        .all(|p| p["secular_residual"].as_f64().unwrap() < 1e-12));
}
