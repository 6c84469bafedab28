use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use canext::lattice::corpus;
use canext::lattice::io::lattice_to_json;
use canext::LatticeHom;
use serde_json::{json, Value};
use tempfile::TempDir;

const CHAIN3: &str = r#"{"name": "chain(3)", "elements": ["0", "a", "1"], "covers": [["0", "a"], ["a", "1"]]}"#;
const M3: &str = r#"{"name": "M3", "elements": ["0", "b", "c", "d", "1"],
  "covers": [["0", "b"], ["0", "c"], ["0", "d"], ["b", "1"], ["c", "1"], ["d", "1"]]}"#;

fn canext(args: &[&str], env: Option<(&str, &Path)>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_canext"));
    cmd.args(args).env_remove("CANEXT_CORPUS_DIR");
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn hom_file(u: &LatticeHom, from: &str, to: &str) -> String {
    let map: serde_json::Map<String, Value> = u
        .src()
        .elements()
        .map(|a| (u.src().element_name(a).to_string(), json!(u.dst().element_name(u.apply(a)))))
        .collect();
    json!({"from": from, "to": to, "map": map}).to_string()
}

#[test]
fn validate_accepts_m3() {
    let dir = TempDir::new().unwrap();
    let o = canext(&["validate", &write(dir.path(), "m3.json", M3)], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("valid lattice M3 (5 elements"));
}

#[test]
fn validate_rejects_missing_top() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"name": "V", "elements": ["0", "a", "b"], "covers": [["0", "a"], ["0", "b"]]}"#;
    let o = canext(&["validate", &write(dir.path(), "v.json", text)], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotBounded"), "{}", stderr(&o));
}

#[test]
fn validate_rejects_non_homomorphism_with_witness() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "chain3.json", CHAIN3);
    write(dir.path(), "m3.json", M3);
    let hom = r#"{"from": "m3.json", "to": "chain3.json", "map": {"0": "0", "b": "a", "c": "a", "d": "0", "1": "1"}}"#;
    let o = canext(&["validate", &write(dir.path(), "bad.hom.json", hom)], None);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("NotAHomomorphism"), "{err}");
    assert!(err.contains('b') && err.contains('c'), "{err}");
}

#[test]
fn missing_file_is_a_validation_failure() {
    let o = canext(&["validate", "/nonexistent/lattice.json"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(canext(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(canext(&["extend", "M3", "--method", "dedekind"], None).status.code(), Some(1));
    assert_eq!(canext(&["--help"], None).status.code(), Some(0));
}

#[test]
fn extend_m3_with_each_method() {
    let out = TempDir::new().unwrap();
    let dir = out.path().to_str().unwrap();
    for method in ["ploscica", "ah", "polarity"] {
        let o = canext(&["extend", "M3", "--method", method, "--out", dir], None);
        assert_eq!(o.status.code(), Some(0), "{method}: {}", stderr(&o));
        let text = stdout(&o);
        assert!(text.contains("(5 elements, method"), "{text}");
        assert!(text.contains("PASS density") && text.contains("PASS compactness"), "{text}");
        if method != "ploscica" {
            assert!(text.contains("isomorphism over L to ploscica(M3)"), "{text}");
        }
        let record = read_json(&out.path().join(format!("M3.{method}.json")));
        assert_eq!(record["size"], 5);
        let dot = fs::read_to_string(out.path().join(format!("M3.{method}.dot"))).unwrap();
        assert!(dot.starts_with("digraph"));
        let sidecar = read_json(&out.path().join(format!("M3.{method}.report.json")));
        assert_eq!(sidecar["size"], 5);
    }
}

#[test]
fn extend_chain4_ah() {
    let out = TempDir::new().unwrap();
    let o = canext(&["extend", "chain(4)", "--method", "ah", "--out", out.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_json(&out.path().join("chain_4_.ah.json"))["size"], 4);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        let o = canext(&["extend", "N5", "--method", "polarity", "--seed", "7", "--out", d.path().to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["N5.polarity.json", "N5.polarity.dot", "N5.polarity.report.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn corpus_dir_override() {
    let corpus_dir = TempDir::new().unwrap();
    write(corpus_dir.path(), "mine.json", M3);
    let out = TempDir::new().unwrap();
    let o = canext(
        &["extend", "mine", "--out", out.path().to_str().unwrap()],
        Some(("CANEXT_CORPUS_DIR", corpus_dir.path())),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(out.path().join("M3.ploscica.json").exists());
}

#[test]
fn lift_reports_mph_composition_counterexample() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "chain3.json", CHAIN3);
    write(dir.path(), "m3.json", M3);
    let hom = r#"{"from": "chain3.json", "to": "m3.json", "map": {"0": "0", "a": "b", "1": "1"}}"#;
    let path = write(dir.path(), "u.hom.json", hom);
    let o = canext(&["lift", &path, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS lift of chain(3) → M3"), "{text}");
    assert!(text.contains("(↑c,↓d) ∘ u = (↑1,↓0)"), "{text}");
    let sidecar = read_json(&dir.path().join("chain_3_-M3.lift.report.json"));
    let bad = sidecar["mph_composition"]["non_maximal"].as_array().unwrap();
    assert!(bad.iter().any(|f| f["mph"] == "(↑c,↓d)"));
}

#[test]
fn lift_of_identity_is_identity() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "m3.json", M3);
    let hom = r#"{"from": "m3.json", "to": "m3.json", "map": {"0": "0", "b": "b", "c": "c", "d": "d", "1": "1"}}"#;
    let path = write(dir.path(), "id.hom.json", hom);
    let o = canext(&["lift", &path, "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let record = read_json(&dir.path().join("M3-M3.lift.json"));
    assert_eq!(record["hom"]["map"], json!([0, 1, 2, 3, 4]));
    assert!(stdout(&o).contains("0 of 6 composites"));
}

#[test]
fn lift_of_seeded_boolean_hom_passes() {
    let dir = TempDir::new().unwrap();
    let b2 = Arc::new(corpus("boolean(2)").unwrap());
    let b3 = Arc::new(corpus("boolean(3)").unwrap());
    write(dir.path(), "b2.json", &lattice_to_json(&b2));
    write(dir.path(), "b3.json", &lattice_to_json(&b3));
    let homs = LatticeHom::enumerate(&b2, &b3);
    assert!(!homs.is_empty());
    let u = &homs[11 % homs.len()];
    let path = write(dir.path(), "u.hom.json", &hom_file(u, "b2.json", "b3.json"));
    let o = canext(&["lift", &path, "--seed", "3", "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("PASS lift of boolean(2) → boolean(3)"));
}

#[test]
fn check_suites_pass() {
    let out = TempDir::new().unwrap();
    for (suite, size) in [("lemmas", "5"), ("oracle", "6"), ("functor", "4")] {
        let o = canext(&["check", "--suite", suite, "--max-size", size, "--out", out.path().to_str().unwrap()], None);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains("all checks passed"));
        let sidecar = read_json(&out.path().join("check.report.json"));
        assert_eq!(sidecar["passed"], true);
    }
}
