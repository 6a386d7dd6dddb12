mod common;

use std::process::{Command, Output};

use serde_json::Value;

use common::fixture_path;

fn syzrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzrep")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str, body: &str) -> String {
    let p = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn analyze_base_points() {
    let o = syzrep(&["analyze", &fixture("base_points.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!((r["mu0"].as_i64(), r["nu0"].as_i64()), (Some(0), Some(2)));
    assert_eq!(r["mprimary"], Value::Bool(false));
    assert!(r["bound_checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn output_is_deterministic() {
    let a = syzrep(&["analyze", &fixture("hilbert_burch.json")]);
    let b = syzrep(&["analyze", &fixture("hilbert_burch.json")]);
    assert_eq!(a.stdout, b.stdout);
    let a = syzrep(&["matrix", &fixture("base_points.json"), "--mu", "1"]);
    let b = syzrep(&["matrix", &fixture("base_points.json"), "--mu", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn matrix_shapes_and_formats() {
    let f = fixture("base_points.json");
    let m = json(&syzrep(&["matrix", &f, "--mu", "auto"]));
    assert_eq!(m["shape"], serde_json::json!([1, 1]));
    let m = json(&syzrep(&["matrix", &f, "--mu", "2", "--lmax", "1"]));
    assert_eq!(m["shape"], serde_json::json!([6, 9]));
    let m = json(&syzrep(&["matrix", &f, "--tune", "2"]));
    assert_eq!(m["mu"], serde_json::json!(1));
    let t = syzrep(&["matrix", &f, "--mu", "1", "--format", "text"]);
    assert_eq!(t.status.code(), Some(0));
    let text = String::from_utf8(t.stdout).unwrap();
    assert!(text.contains("T3^2"), "{text}");
}

#[test]
fn implicitize_both_fixtures() {
    let o = syzrep(&["implicitize", &fixture("base_points.json"), "--mu", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["verified"], Value::Bool(true));
    assert_eq!(r["degree"], serde_json::json!(3));
    let o = syzrep(&["implicitize", &fixture("hilbert_burch.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["degree"], serde_json::json!(3));
    let o = syzrep(&["implicitize", &fixture("quadrics_mod_p.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["degree"], serde_json::json!(4));
}

#[test]
fn writes_to_file() {
    let out = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("report.json");
    let o = syzrep(&["analyze", &fixture("base_points.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["nu0"], serde_json::json!(2));
}

#[test]
fn appendix_commands() {
    for args in [
        ["appendix", "lefschetz", "--n", "3", "--m", "3"].as_slice(),
        &["appendix", "signs", "--n", "4", "--d", "4"],
        &["appendix", "lemme", "--m", "3", "--t", "3"],
        &["appendix", "kernel", "--m", "2", "--t", "2", "--N", "3"],
    ] {
        let o = syzrep(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(json(&o)["passed"], Value::Bool(true));
    }
    assert_eq!(syzrep(&["appendix", "lefschetz", "--n", "9", "--m", "9"]).status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(syzrep(&["analyze", "/nonexistent.json"]).status.code(), Some(1));
    let bad =
        scratch("bad_form.json", r#"{"field": "Q", "variables": ["X1", "X2"], "forms": ["X1^2", "X1 X2", "X2^2"]}"#);
    let o = syzrep(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let mixed = scratch("mixed.json", r#"{"field": "Q", "variables": ["X1", "X2"], "forms": ["X1^2", "X1", "X2^2"]}"#);
    assert_eq!(syzrep(&["analyze", &mixed]).status.code(), Some(1));
    let surface = scratch(
        "curve.json",
        r#"{"field": "Q", "variables": ["X1", "X2", "X3"], "forms": ["X1^3", "X1*X2^2", "X1^2*X2", "X1*X3^2"]}"#,
    );
    assert_eq!(syzrep(&["analyze", &surface]).status.code(), Some(2));
    assert_eq!(syzrep(&["matrix", &fixture("base_points.json"), "--mu", "x"]).status.code(), Some(1));
    assert_eq!(syzrep(&["matrix", &fixture("base_points.json"), "--mu", "1", "--tune", "1"]).status.code(), Some(1));
    assert_eq!(syzrep(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(syzrep(&["--help"]).status.code(), Some(0));
}
