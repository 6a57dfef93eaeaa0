use std::path::Path;
use std::process::{Command, Output};

use obstruct::dgcore::{CochainComplex, DgAlgebra};
use obstruct::exactla::{Fp, Matrix};
use obstruct::graded::{Basis, Homog};
use serde_json::Value;

fn obstruct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstruct"))
        .args(args)
        .env_remove("OBSTRUCT_WINDOW")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(obstruct(&["m3", "cyclic:4"]).status.code(), Some(0));
    assert_eq!(obstruct(&["--help"]).status.code(), Some(0));
    assert_eq!(obstruct(&["--version"]).status.code(), Some(0));
    assert_eq!(obstruct(&["--window", "500", "m3", "cyclic:3"]).status.code(), Some(2));
    assert_eq!(obstruct(&["localize", "cyclic:3", "--invert", "Y^30"]).status.code(), Some(2));
    assert_eq!(obstruct(&["m3", "bogus:3"]).status.code(), Some(3));
    assert_eq!(obstruct(&["m3", "cyclic:6"]).status.code(), Some(3));
    assert_eq!(obstruct(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(obstruct(&["--window", "0", "m3", "cyclic:3"]).status.code(), Some(3));
    assert_eq!(obstruct(&["hochschild-delta", "{not json", "--algebra", "cyclic:3"]).status.code(), Some(3));
    let err = obstruct(&["m3", "bogus:3"]);
    assert!(String::from_utf8_lossy(&err.stderr).starts_with("error:"));
}

#[test]
fn output_is_deterministic() {
    let a = obstruct(&["m3", "cyclic:3", "--window", "6"]);
    let b = obstruct(&["m3", "cyclic:3", "--window", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["class"]["verdict"], "NONTRIVIAL");
    assert_eq!(v["window"], 6);
}

#[test]
fn window_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_obstruct"))
        .args(["m3", "cyclic:4"])
        .env("OBSTRUCT_WINDOW", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["window"], 5);
    // the flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_obstruct"))
        .args(["m3", "cyclic:4", "--window", "4"])
        .env("OBSTRUCT_WINDOW", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["window"], 4);
}

#[test]
fn cache_hits_return_the_stored_result() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = obstruct(&["--cache", cache, "m3", "cyclic:5", "--window", "6"]);
    assert!(first.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert!(!entries.is_empty());
    let second = obstruct(&["--cache", cache, "m3", "cyclic:5", "--window", "6"]);
    assert_eq!(first.stdout, second.stdout);
    let uncached = obstruct(&["m3", "cyclic:5", "--window", "6"]);
    assert_eq!(first.stdout, uncached.stdout);
}

#[test]
fn order_four_class_is_trivial() {
    let v = json(&obstruct(&["m3", "cyclic:4"]));
    assert_eq!(v["class"]["verdict"], "TRIVIAL_UP_TO_WINDOW");
    assert!(v["class"]["witness"].is_object());
}

fn write_zero_differential_algebra(path: &Path) {
    // k[u]/(u^3), |u| = 2, d = 0
    let f = Fp::new(5).unwrap();
    let dims = vec![1, 0, 1, 0, 1, 0, 0];
    let d = (0..6).map(|k| Matrix::zeros(f, dims[k + 1], dims[k])).collect();
    let complex = CochainComplex::new(f, 0, dims, d, (0, 6)).unwrap();
    let mut a = DgAlgebra::new(complex, Homog { deg: 0, coeffs: vec![1] }, 0).unwrap();
    for (i, j) in [(0, 0), (0, 2), (2, 0), (0, 4), (4, 0), (2, 2)] {
        a.set_product(Basis::new(i, 0), Basis::new(j, 0), vec![(0, 1)]);
    }
    std::fs::write(path, serde_json::to_string(&a.to_json()).unwrap()).unwrap();
}

#[test]
fn dga_file_with_zero_differential() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dga.json");
    write_zero_differential_algebra(&path);
    let v = json(&obstruct(&["m3", path.to_str().unwrap(), "--window", "5"]));
    assert_eq!(v["m3"].as_array().unwrap().len(), 0);
}

#[test]
fn localize_reports_the_presentation() {
    let v = json(&obstruct(&["localize", "cyclic:3", "--invert", "Y"]));
    assert_eq!(v["summary"]["period"], 2);
    assert_eq!(v["summary"]["zero_ring"], false);
    let gens: Vec<&str> = v["presentation"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["name"].as_str().unwrap())
        .collect();
    assert_eq!(gens, vec!["X", "Y", "Y^-1"]);
    let zero = json(&obstruct(&["localize", "cyclic:3", "--invert", "X*Y"]));
    assert_eq!(zero["summary"]["zero_ring"], true);
    let set = json(&obstruct(&["localize", "cyclic:3", "--set", r#"{"invert": ["Y"]}"#]));
    assert_eq!(set["summary"], v["summary"]);
}

#[test]
fn coboundary_of_a_non_derivation() {
    let cochain = r#"{"arity": 1, "degree": 0, "values": [{"args": ["X"], "value": "X"}]}"#;
    let v = json(&obstruct(&["hochschild-delta", cochain, "--algebra", "cyclic:3", "--window", "4"]));
    assert_eq!(v["arity"], 2);
    let entries = v["delta"].as_array().unwrap();
    // delta(phi)(X, Y) = X phi(Y) - phi(XY) + phi(X) Y = XY
    assert!(entries.iter().any(|e| e["args"] == serde_json::json!(["X", "Y"]) && e["value"] == "X*Y"));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = obstruct(&["-o", path.to_str().unwrap(), "m3", "cyclic:2", "--window", "4"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["algebra"], "cyclic:2");
}

#[test]
fn demo_runs_a_selected_criterion() {
    let out = obstruct(&["demo", "--only", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("1/1 criteria passed"), "{text}");
}
