use std::path::Path;
use std::process::{Command, Output};

use koszul_core::fixtures::{checks, fixtures, json_contains};
use serde_json::Value;

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn emitted() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = koszul(&["emit-fixtures", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    dir
}

fn run_on(dir: &Path, file: &str, args: &[&str]) -> Output {
    let path = dir.join(file);
    let mut full = vec![args[0], path.to_str().unwrap()];
    full.extend_from_slice(&args[1..]);
    koszul(&full)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn every_manifest_check_holds() {
    let dir = emitted();
    for c in checks() {
        let out = run_on(dir.path(), c.file, &c.args);
        assert_eq!(out.status.code(), Some(0), "{} {:?}", c.file, c.args);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(json_contains(&v, &c.expected), "{} {:?}: {v}", c.file, c.args);
        assert!(v.get("version").is_some() && v.get("checked_up_to").is_some());
    }
}

#[test]
fn emits_every_fixture_and_manifest() {
    let dir = emitted();
    assert!(fixtures().len() >= 10);
    for f in fixtures() {
        assert!(dir.path().join(f.file).exists(), "{}", f.file);
    }
    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["checks"].as_array().unwrap().len(), checks().len());
}

#[test]
fn reports_are_byte_identical() {
    let dir = emitted();
    for (file, cmd) in [
        ("hexagon.json", "koszul"),
        ("f1.toml", "toric"),
        ("p2-path-fibration.json", "fibration"),
    ] {
        let a = run_on(dir.path(), file, &[cmd]);
        let b = run_on(dir.path(), file, &[cmd]);
        assert_eq!(a.stdout, b.stdout, "{file}");
    }
}

#[test]
fn false_verdict_still_exits_zero() {
    let dir = emitted();
    let out = run_on(dir.path(), "hexagon.json", &["koszul"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["koszul"], false);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "broken.json",
        "{\n  \"kind\": \"poset\",\n  \"elements\": [1,\n",
    );
    let out = koszul(&["koszul", &p]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn schema_error_names_key() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "extra.json",
        r#"{"kind": "poset", "elements": ["a"], "relations": [], "colour": 1}"#,
    );
    let out = koszul(&["koszul", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("`colour`"));
}

#[test]
fn toml_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "spec.toml",
        "free_rank = 1\nvariables = []\ncollection = [[0]]\nweights = 2\n",
    );
    let out = koszul(&["toric", &p]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("weights"));
}

#[test]
fn input_errors_exit_two() {
    let dir = emitted();
    let d = dir.path();
    assert_eq!(
        run_on(d, "diamond.json", &["koszul", "--char", "6"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run_on(d, "diamond.json", &["koszul", "--max-length", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run_on(d, "f1.toml", &["cm"]).status.code(), Some(2));
    assert_eq!(run_on(d, "a2-chain.json", &["cm"]).status.code(), Some(2));
    assert_eq!(
        run_on(d, "beilinson-p2.json", &["ext", "--from", "v9", "--to", "v1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run_on(
            d,
            "kx-truncated.json",
            &["ext", "--from", "v", "--to", "v", "--degree", "7"]
        )
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        koszul(&["koszul", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
}

#[test]
fn max_length_lowers_checked_bound() {
    let dir = emitted();
    let out = run_on(dir.path(), "kx-truncated.json", &["koszul", "--max-length", "3"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checked_up_to"], 3);
    assert_eq!(v["koszul"], true);
}

#[test]
fn prime_field_agrees_on_fixtures() {
    let dir = emitted();
    for file in ["hexagon.json", "diamond.json", "beilinson-p2.json"] {
        let q: Value = serde_json::from_slice(&run_on(dir.path(), file, &["koszul"]).stdout).unwrap();
        let p: Value =
            serde_json::from_slice(&run_on(dir.path(), file, &["koszul", "--char", "2"]).stdout).unwrap();
        assert_eq!(q["koszul"], p["koszul"], "{file}");
        assert_eq!(p["field"], "F_2");
    }
}

#[test]
fn table_output_lists_keys() {
    let dir = emitted();
    let out = run_on(dir.path(), "f1.toml", &["toric", "--output", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("koszul ") && l.ends_with("false")));
    assert!(text.contains("x3∘x2∘x1"));
}

#[test]
fn ext_without_degree_lists_all() {
    let dir = emitted();
    let out = run_on(
        dir.path(),
        "beilinson-p2.json",
        &["ext", "--from", "v3", "--to", "v1"],
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ext_by_degree"], serde_json::json!({"2": {"2": 3}}));
}

#[test]
fn failing_relation_is_a_verdict() {
    let dir = tempfile::tempdir().unwrap();
    // [a,b] ~ [a,c] without gluing b and c breaks A2
    let p = write(
        dir.path(),
        "rel.json",
        r#"{"kind": "rs-relation",
            "poset": {"elements": ["a", "b", "c"], "relations": [["a", "b"], ["a", "c"]]},
            "classes": [[["a", "b"], ["a", "c"]]]}"#,
    );
    let out = koszul(&["rs-verify", &p]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passes"], false);
    assert_eq!(koszul(&["rs-quotient", &p]).status.code(), Some(2));
}
