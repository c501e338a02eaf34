use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudothick")).args(args).output().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|_| panic!("{}", String::from_utf8_lossy(&o.stderr)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn failures_are_json_with_a_stage() {
    let dir = tempfile::tempdir().unwrap();
    let missing = write(dir.path(), "missing.json", r#"{"vertices":[{"id":"a"}],"simplices":[["a","b"]]}"#);
    let o = cli(&["validate", &missing]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["stage"], "input");

    let o = cli(&["run", "fixture:edge"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["stage"], "input");
    assert!(e["error"].as_str().unwrap().contains("d >= 2 required"));

    let o = cli(&["orient", "fixture:projective-plane-6"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["stage"], "verify");
    let out: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!out["odd_cycle"]["cycle"].as_array().unwrap().is_empty());
}

#[test]
fn non_reduced_coordinates_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"vertices":[{"id":"a","coords":["2/4"]}],"simplices":[]}"#);
    let text = std::fs::read_to_string(&bad).unwrap();
    assert!(pseudothick::io::map_from_json(&text).is_err());
    let good = pseudothick::io::map_from_json(&text.replace("2/4", "1/2")).unwrap();
    let once = pseudothick::io::map_to_json(&good);
    assert!(once.contains("\"1/2\""));
    assert_eq!(pseudothick::io::map_to_json(&pseudothick::io::map_from_json(&once).unwrap()), once);
}

#[test]
fn subdivide_output_reloads() {
    let o = cli(&["subdivide", "fixture:triangle"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "b.json", &String::from_utf8(o.stdout).unwrap());
    let v = cli(&["validate", &file]);
    assert!(v.status.success());
    let rep: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(rep["f_vector"], serde_json::json!([7, 12, 6]));
}

#[test]
fn thicken_writes_identical_artifacts_twice() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = cli(&["thicken", "fixture:triangle", "--seed", "3", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["p.json", "provenance.json", "report.json", "x_copy.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let p = std::fs::read_to_string(a.path().join("p.json")).unwrap();
    let checked = cli(&["homology", &a.path().join("p.json").to_string_lossy()]);
    let h: Value = serde_json::from_slice(&checked.stdout).unwrap();
    assert_eq!(h["groups"][0]["betti"], 1);
    assert!(p.contains("\"w:a\""));
}

#[test]
fn close_small_fixture_globally_and_locally() {
    let o = cli(&["close", "fixture:four-cycle-cone"]);
    assert!(o.status.success());
    let g: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["close"]["mode"], "global");
    let o = cli(&["close", "fixture:four-cycle-cone", "--local-only"]);
    assert!(o.status.success());
    let l: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(l["close"]["mode"], "local");
    assert_eq!(l["close"]["report"]["all_closed_manifolds"], true);
}
