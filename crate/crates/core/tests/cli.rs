use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bvbfv")).args(args).env("BVBFV_OUT_DIR", dir).current_dir(dir).output().expect("binary runs")
}

fn report(dir: &Path, stem: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.json"))).unwrap()).unwrap()
}

#[test]
fn passing_run_exits_zero_and_writes_to_env_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify-cme", "--model", "cs3", "--algebra", "su2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path(), "verify-cme");
    assert_eq!(r["schema"], 1);
    assert_eq!(r["status"], "pass");
    for c in r["checks"].as_array().unwrap() {
        for key in ["name", "paperEq", "status", "residual"] {
            assert!(c[key].is_string(), "{key} in {c}");
        }
    }
}

#[test]
fn failing_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let alg = dir.path().join("bad.json");
    std::fs::write(&alg, bvbfv::report::mutated_algebra().unwrap().to_json().to_string()).unwrap();
    let out = run(dir.path(), &["verify-cme", "--algebra", alg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path(), "verify-cme");
    let jacobi = r["checks"].as_array().unwrap().iter().find(|c| c["name"] == "jacobi").unwrap();
    assert_eq!(jacobi["status"], "fail");
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["dirac", "--algebra", "sl7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(dir.path(), "dirac")["status"], "error");
}

#[test]
fn signed_points_parse() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["cohomology", "--points", "+su2:0.5", "-su2:1", "--hbar", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(dir.path(), "cohomology");
    assert_eq!(r["config"]["hbar"], "2");
}

#[test]
fn explicit_out_path_wins() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested/w.json");
    let out = run(dir.path(), &["wilson", "--configs", "5", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(target.exists());
    assert!(!dir.path().join("wilson.json").exists());
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        run(d, &["suite", "numeric", "--seed", "7"]);
        run(d, &["derive-bfv", "--model", "cs1"]);
    }
    for stem in ["suite-numeric", "derive-bfv"] {
        let x = std::fs::read(a.path().join(format!("{stem}.json"))).unwrap();
        let y = std::fs::read(b.path().join(format!("{stem}.json"))).unwrap();
        assert_eq!(x, y, "{stem}");
    }
}
