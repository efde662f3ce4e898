use std::process::Command;

use delta_robin::cli::{format_float, parse_place_list, run};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("delta-robin").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn write_spec(dir: &tempfile::TempDir, text: &str) -> String {
    let path = dir.path().join("places.txt");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn real_values() {
    let v = json(&["real", "--r", "2"]);
    assert!((v["v_delta"].as_f64().unwrap() - 0.479264).abs() < 1e-6);
    assert_eq!(v["regime"], "weighted");
    let v = json(&["real", "--r", "1"]);
    assert!((v["v_delta"].as_f64().unwrap() - 0.693147).abs() < 1e-6);
    let v = json(&["real", "--r", "0.5"]);
    assert_eq!(v["v_delta"].as_f64().unwrap(), format_float(4f64.ln()).parse::<f64>().unwrap());
    assert_eq!(v["regime"], "classical");
}

#[test]
fn real_density_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("density.csv");
    let (code, _, err) = call(&["real", "--r", "2", "--density-samples", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,density");
    assert_eq!(lines.len(), 9);
    let (code, _, _) = call(&["real", "--r", "2", "--density-samples", "8"]);
    assert_eq!(code, 2);
}

#[test]
fn real_errors() {
    assert_eq!(call(&["real", "--r", "-1"]).0, 2);
    assert_eq!(call(&["real", "--r", "abc"]).0, 2);
    assert_eq!(call(&["real"]).0, 2);
    assert_eq!(call(&["nonsense"]).0, 2);
    assert_eq!(call(&["--format", "xml", "real", "--r", "1"]).0, 2);
}

#[test]
fn padic_output() {
    let (code, out, _) = call(&["padic", "--p", "2", "--n", "-1"]);
    assert_eq!(code, 0);
    assert!(out.contains("3/4 · log 2 = 0.51986"), "{out}");
    assert!(out.contains("c_0 = 3/4") && out.contains("c_-1 = 1/4"), "{out}");

    let v = json(&["padic", "--p", "2", "--n", "-1"]);
    assert_eq!(v["v_delta"]["coeff"], "3/4");
    assert_eq!(v["coefficients"]["0"], "3/4");
    assert_eq!(v["coefficients"]["-1"], "1/4");

    let (_, out, _) = call(&["padic", "--p", "5", "--n", "0"]);
    assert!(out.contains("1/4 · log 5"), "{out}");
    let (_, out, _) = call(&["padic", "--p", "2", "--e", "2", "--f", "1", "--n", "0"]);
    assert!(out.contains("1/2 · log 2"), "{out}");

    let (code, out, err) = call(&["padic", "--p", "6", "--n", "-1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("not a prime"));
    assert_eq!(call(&["padic", "--p", "3", "--e", "0", "--n", "1"]).0, 2);
}

#[test]
fn global_examples() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "# dyadic example\nreal r=2\n\npadic p=2 n=-1\n");
    let v = json(&["global", "--spec", &path]);
    assert!((v["total"].as_f64().unwrap() - 0.499562).abs() < 1e-6);
    let refs: Vec<(String, f64)> = v["references"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["name"].as_str().unwrap().to_string(), r["value"].as_f64().unwrap()))
        .collect();
    assert_eq!(refs[0].0, "schinzel");
    assert!((refs[0].1 - 0.24061).abs() < 1e-5);
    assert!((refs[1].1 - 0.115525).abs() < 1e-6);
    assert!((refs[2].1 - 0.444188).abs() < 1e-6);

    let path = write_spec(&dir, "real r=1\n");
    let v = json(&["global", "--spec", &path]);
    assert!((v["total"].as_f64().unwrap() - 0.346574).abs() < 1e-6);

    let path = write_spec(&dir, "real r=2 weight=1/2\npadic p=3 e=2 f=1 n=-2 weight=1/2\n");
    let (code, out, _) = call(&["--format", "csv", "global", "--spec", &path]);
    assert_eq!(code, 0);
    assert!(out.starts_with("item,weight,v_delta_exact,v_delta,contribution\n"));
    assert!(out.contains("padic p=3 e=2 f=1 n=-2,1/2,"), "{out}");
}

#[test]
fn global_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "# nothing here\n\n");
    assert_eq!(call(&["global", "--spec", &path]).0, 2);
    let path = write_spec(&dir, "padic p=2 n=-1\npadic p=2 n=-3\n");
    assert_eq!(call(&["global", "--spec", &path]).0, 4);
    let path = write_spec(&dir, "real r=1\nreal r=2\n");
    assert_eq!(call(&["global", "--spec", &path]).0, 2);
    let path = write_spec(&dir, "real r=1\npadic p=9 n=0\n");
    let (code, _, err) = call(&["global", "--spec", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(call(&["global", "--spec", "/nonexistent/places.txt"]).0, 2);
}

#[test]
fn place_list_parsing() {
    let places = parse_place_list("real r=3 # trailing comment\npadic p=5 f=2 n=-1 weight=2/3\n").unwrap();
    assert_eq!(places.len(), 2);
    for (text, line) in [
        ("real\n", "line 1"),
        ("\nreal r=1 r=2\n", "line 2"),
        ("real r=1\n\ncomplex r=1\n", "line 3"),
        ("padic p=2\n", "line 1"),
        ("padic p=2 n=-1 q=4\n", "line 1"),
        ("real r=1 weight=3/2\n", "line 1"),
        ("real r=1 weight=0\n", "line 1"),
        ("real r=1 weight\n", "line 1"),
    ] {
        let e = parse_place_list(text).unwrap_err();
        assert!(e.starts_with(line), "{text:?}: {e}");
    }
}

#[test]
fn json_round_trips_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_spec(&dir, "real r=2\npadic p=2 n=-1\n");
    for args in [
        vec!["--format", "json", "real", "--r", "3.7"],
        vec!["--format", "json", "padic", "--p", "3", "--n", "-4"],
        vec!["--format", "json", "global", "--spec", path.as_str()],
    ] {
        let (code, out, _) = call(&args);
        assert_eq!(code, 0);
        let parsed: Value = serde_json::from_str(&out).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(out, again);
    }
}

#[test]
fn float_formatting() {
    assert_eq!(format_float(0.1 + 0.2), "0.3");
    assert_eq!(format_float(2.0), "2.0");
    assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
    assert_eq!(format_float(f64::INFINITY), "inf");
}

#[test]
fn verify_padic_suite() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = call(&["verify", "--suite", "padic", "--depth", "1", "--export-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")), "{out}");
    assert!(dir.path().join("padic_p2_n-1_depth1.csv").exists());
}

#[test]
fn verify_real_suite_small_grid_fails() {
    // 50 cells is far too coarse for the 1e-3 energy tolerance.
    let (code, out, _) = call(&["--format", "csv", "verify", "--suite", "real", "--m", "50"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("check,status,observed,expected\n"));
    assert!(out.contains(",FAIL,"));
    assert_eq!(call(&["verify", "--suite", "real", "--m", "5"]).0, 2);
}

#[test]
fn verify_real_suite() {
    let v = json(&["verify", "--suite", "real", "--m", "2000"]);
    assert_eq!(v["all_passed"], true, "{v}");
    assert_eq!(v["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn binary_honours_tolerance_override() {
    let bin = env!("CARGO_BIN_EXE_delta-robin");
    let out = Command::new(bin)
        .args(["--format", "json", "real", "--r", "2"])
        .env("ROBIN_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["v_delta"].as_f64().unwrap() - 0.479264).abs() < 1e-5);

    let out = Command::new(bin)
        .args(["real", "--r", "2"])
        .env("ROBIN_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let out = Command::new(bin).arg("--help").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}
