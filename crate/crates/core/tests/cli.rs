use std::process::{Command, Output};

use serde_json::Value;

use quartic_finsler::catalog::Preset;
use quartic_finsler::quartic::load_quartic;

fn qfinsler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfinsler"))
        .args(args)
        .env("QF_THREADS", "2")
        .output()
        .unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = qfinsler(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_kind(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn classify_power_diff() {
    let v = json_ok(&["classify", "--preset", "power_diff", "--v", "2,1"]);
    assert_eq!(v["sign"], "spacelike");
    assert_eq!(v["metric"], "lorentzian");
    assert_eq!(v["differentiable"], true);
}

#[test]
fn metric_of_euclidean_square_is_identity() {
    let v = json_ok(&["metric", "--preset", "euclid_square", "--v", "3,4"]);
    let f: Vec<Vec<f64>> = serde_json::from_value(v["f"].clone()).unwrap();
    for (i, row) in f.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((x - want).abs() < 1e-14);
        }
    }
}

#[test]
fn negative_components_parse() {
    let v = json_ok(&["eval", "--preset", "power_diff", "--v", "-1,2"]);
    assert_eq!(v["q"], -15.0);
    assert_eq!(v["sign"], "timelike");
}

#[test]
fn vacuum_fresnel_value() {
    let v = json_ok(&["fresnel", "--preset", "vacuum", "--q", "1,0,0,0"]);
    assert_eq!(v["value"], -0.125);
}

#[test]
fn fresnel_save_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = qfinsler(&["fresnel", "--preset", "uniaxial(2,3,1.5)", "--save", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let saved = load_quartic(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved, Preset::parse("uniaxial(2,3,1.5)", None).unwrap().fresnel_quartic().unwrap());

    let v = json_ok(&["eval", "--quartic", path.to_str().unwrap(), "--v", "1,0,0,0"]);
    assert_eq!(v["q"].as_f64().unwrap(), saved.eval(&[1.0, 0.0, 0.0, 0.0]));
}

#[test]
fn chi_blocks_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chi.json");
    std::fs::write(&path, r#"{"eps": [[1,0,0],[0,1,0],[0,0,1]], "pi": [[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
    let v = json_ok(&["fresnel", "--chi", path.to_str().unwrap(), "--q", "1,0,0,0"]);
    // twice the vacuum blocks scale the cubic expression by 8
    assert_eq!(v["value"], -1.0);
}

#[test]
fn origin_is_an_error() {
    let out = qfinsler(&["classify", "--preset", "power_sum", "--v", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!error_kind(&out).is_empty());
}

#[test]
fn bad_preset_is_an_error() {
    let out = qfinsler(&["eval", "--preset", "nope", "--v", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "invalid_parameter");
}

#[test]
fn dimension_mismatch_is_an_error() {
    let out = qfinsler(&["eval", "--preset", "vacuum", "--v", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_kind(&out), "dimension_mismatch");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qfinsler(&["classify", "--preset", "power_sum"]).status.code(), Some(2));
    assert_eq!(qfinsler(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn ee_map_has_4096_rows_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let curve = dir.path().join("curve.csv");
    for (path, threads) in [(&a, "1"), (&b, "4")] {
        let out = Command::new(env!("CARGO_BIN_EXE_qfinsler"))
            .args(["map", "--family", "ee", "--k-range", "1,50", "--grid", "64x64", "--out"])
            .arg(path)
            .arg("--curve")
            .arg(&curve)
            .env("QF_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,angle,det,label"));
    assert_eq!(lines.count(), 4096);
    assert!(text.contains(",degenerate") || text.contains(",lorentzian"));
    assert!(std::fs::read_to_string(&curve).unwrap().lines().count() > 1);
}

#[test]
fn ll_map_has_no_euclidean_cells() {
    let out = qfinsler(&["map", "--family", "ll", "--k-range", "0.5,4", "--grid", "16x32"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 16 * 32);
    assert!(!text.contains(",euclidean"));
}

#[test]
fn scan_json_lists_boundaries() {
    let v = json_ok(&["scan", "--preset", "power_diff", "--resolution", "64", "--format", "json"]);
    let kinds: Vec<&str> = v["boundaries"].as_array().unwrap().iter().map(|b| b["kind"].as_str().unwrap()).collect();
    // null rays on the diagonals, degenerate metric on the axes
    assert_eq!(kinds.iter().filter(|k| **k == "null").count(), 4);
    assert_eq!(kinds.iter().filter(|k| **k == "degenerate").count(), 4);
    assert_eq!(v["samples"].as_array().unwrap().len(), 64);
}

#[test]
fn indicatrix_csv() {
    let out = qfinsler(&["indicatrix", "--preset", "power_sum", "--level", "1", "--resolution", "128"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1 + 128);
}

#[test]
fn reproduce_passes() {
    let out = qfinsler(&["reproduce", "--resolution", "360", "--points", "2048"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
}
