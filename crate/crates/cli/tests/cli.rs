use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use tempfile::TempDir;

use serde_json::Value;

fn tempcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixtures(dir: &Path, seed: &str) {
    let out = tempcert(&["selftest-fixtures", "--output", dir.to_str().unwrap(), "--seed", seed]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

/// Fixture generation is the slowest step, so most tests share one set.
fn shared() -> &'static Path {
    static DIR: OnceLock<TempDir> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        fixtures(dir.path(), "7");
        dir
    })
    .path()
}

fn path(dir: &Path, file: &str) -> String {
    dir.join(file).to_str().unwrap().to_owned()
}

#[test]
fn bounds_match_closed_forms() {
    for (n, c, q, brute) in [(3, 8, 10, Some(8)), (4, 32, 40, Some(32)), (6, 160, 200, None)] {
        let out = tempcert(&["bounds", "--n", &n.to_string()]);
        assert!(out.status.success());
        let v = json(&out);
        assert_eq!(v["eta_C"], c);
        assert_eq!(v["eta_Q"], q);
        assert_eq!(v["brute_force"].as_i64(), brute);
    }
}

#[test]
fn too_few_qubits_is_a_usage_error() {
    let out = tempcert(&["bounds", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn built_inequality_evaluates_like_the_builtin() {
    let scratch = tempfile::tempdir().unwrap();
    let ineq = path(scratch.path(), "t4.json");
    let out = tempcert(&["build", "--n", "4", "--output", &ineq]);
    assert!(out.status.success());
    let exported: Value = serde_json::from_str(&std::fs::read_to_string(&ineq).unwrap()).unwrap();
    assert_eq!(exported.as_array().unwrap().len(), 26);

    let real = path(shared(), "canonical_n4.json");
    let a = json(&tempcert(&["evaluate", "--input", &real]));
    let b = json(&tempcert(&["evaluate", "--input", &real, "--inequality", &ineq]));
    assert!((a["total"].as_f64().unwrap() - 40.0).abs() < 1e-9);
    assert_eq!(a["total"], b["total"]);
    assert_eq!(a["eta_c"], b["eta_c"]);
}

#[test]
fn canonical_three_qubits_reach_ten() {
    let out = tempcert(&["evaluate", "--input", &path(shared(), "canonical_n3.json")]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["total"].as_f64().unwrap() - 10.0).abs() < 1e-9);
    assert_eq!(v["violated"], true);
}

#[test]
fn input_errors_have_distinct_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut real: Value =
        serde_json::from_str(&std::fs::read_to_string(shared().join("canonical_n3.json")).unwrap()).unwrap();
    // Doubling B2 breaks the involution property.
    let b2 = real["observables"]["B2"].as_array_mut().unwrap();
    for row in b2 {
        for entry in row.as_array_mut().unwrap() {
            let re = entry[0].as_f64().unwrap();
            entry[0] = (2.0 * re).into();
        }
    }
    let bad = path(dir.path(), "bad_matrix.json");
    std::fs::write(&bad, real.to_string()).unwrap();
    let out = tempcert(&["evaluate", "--input", &bad]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("B2"));

    let schema = path(dir.path(), "schema.json");
    std::fs::write(&schema, r#"{"n": 3}"#).unwrap();
    assert_eq!(tempcert(&["evaluate", "--input", &schema]).status.code(), Some(3));

    let missing = path(dir.path(), "missing.json");
    assert_eq!(tempcert(&["certify", "--input", &missing]).status.code(), Some(5));
}

#[test]
fn certify_verdicts_drive_the_exit_code() {
    let ok = tempcert(&["certify", "--input", &path(shared(), "canonical_n3.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verdict"], "pass");

    let bad = tempcert(&["certify", "--input", &path(shared(), "perturbed_n3.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["verdict"], "fail");
}

#[test]
fn fixtures_are_reproducible() {
    let a = shared();
    let b = tempfile::tempdir().unwrap();
    fixtures(b.path(), "7");
    let mut names: Vec<_> = std::fs::read_dir(a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 16);
    for name in &names {
        let x = std::fs::read(a.join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name:?} differs between runs");
    }

    let manifest: Value =
        serde_json::from_slice(&std::fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    for (n, total) in [(3, 10.0), (4, 40.0), (5, 100.0)] {
        let entry = manifest["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["source"] == "canonical" && e["n"] == n)
            .unwrap();
        assert_eq!(entry["expected_total"].as_f64(), Some(total));
        assert_eq!(entry["expected_verdict"], "pass");
    }
}
