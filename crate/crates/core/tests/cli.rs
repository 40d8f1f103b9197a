use std::process::{Command, Output};

use serde_json::Value;

fn icefold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icefold"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = icefold(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn fold_matrix_of_a3() {
    let v = json(&["fold-matrix", "fixtures/a3.iq"]);
    assert_eq!(v["entries"], serde_json::json!([[0, 2], [-1, 0], [1, 0], [0, 1]]));
    assert_eq!(v["rows"], serde_json::json!([1, 2, 4, 5]));
    assert_eq!(v["column_symmetrizer"], serde_json::json!([2, 1]));
    let col = json(&["fold-matrix", "fixtures/a3.iq", "--convention", "column"]);
    assert_eq!(col["convention"], "column");
}

#[test]
fn single_mutations_match_orbit_mutation() {
    let a = icefold(&["mutate", "fixtures/a3.iq", "--at", "1", "--at", "3"]);
    let b = icefold(&["orbit-mutate", "fixtures/a3.iq", "--orbit", "1"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn folded_a3_has_six_clusters() {
    let v = json(&["enumerate", "fixtures/a3.iq", "--folded"]);
    assert_eq!(v["clusters"], 6);
    assert_eq!(v["variables"].as_array().unwrap().len(), 6);
    assert_eq!(v["complete"], true);
}

#[test]
fn character_of_the_fixture_module() {
    let v = json(&["character", "fixtures/a3-module.iq"]);
    assert_eq!(v["character"], "x2^-1*x3*x4*x5 + x1^-1 + x1^-1*x2^-1*x4");
    assert_eq!(v["projected"], "x1*x2^-1*x4*x5 + x1^-1 + x1^-1*x2^-1*x4");
    let thin = json(&["character", "fixtures/a3.iq", "--thin", "1"]);
    assert_eq!(thin["character"], "x1^-1*x2 + x1^-1*x4");
}

#[test]
fn check_passes_on_the_potential_fixture() {
    let out = icefold(&["check", "fixtures/zl2-potential.iq", "--random", "10", "--seed", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")));
    assert!(text.contains("d² = 0"));
}

#[test]
fn fold_outputs_are_deterministic() {
    for args in [
        &["fold-quiver", "fixtures/zl2-potential.iq"][..],
        &["fold-potential", "fixtures/zl2-potential.iq", "--normalize"],
        &["ginzburg", "fixtures/zl2-potential.iq"],
        &["preprojective", "fixtures/zl2-potential.iq"],
    ] {
        let (a, b) = (icefold(args), icefold(args));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn exit_codes() {
    let frozen = icefold(&["orbit-mutate", "fixtures/a3.iq", "--orbit", "4"]);
    assert_eq!(frozen.status.code(), Some(1));
    let missing = icefold(&["fold-matrix", "fixtures/missing.iq"]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("icefold-cli-{}.iq", std::process::id()));
    std::fs::write(&dir, "QUIVER bad\nVERTICES 1 2\nARROWS\na: 1 -> 2\nb: 1 -> 9\n").unwrap();
    let bad = icefold(&["fold-matrix", dir.to_str().unwrap()]);
    std::fs::remove_file(&dir).unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 5"));
    let err = icefold(&[
        "--format",
        "json",
        "fold-matrix",
        "fixtures/a3.iq",
        "--convention",
        "diagonal",
    ]);
    assert_eq!(err.status.code(), Some(2));
}
