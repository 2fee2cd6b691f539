//! Frozen derivations. Set `BVBFV_BLESS=1` to rewrite the files after an
//! intended change; the hand-computed checks below do not depend on them.

use std::path::PathBuf;

use bvbfv::lie::builtin;
use bvbfv::report::{derive_bfv, dirac, verify_cme, DiracConfig, ModelConfig, ModelKind, Report};
use bvbfv::scalar::int;
use serde_json::Value;

fn golden(name: &str, r: &Report) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    let got = r.to_pretty();
    if std::env::var_os("BVBFV_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(got, want, "{} differs from the frozen copy", path.display());
}

fn model(kind: ModelKind, lines: usize) -> ModelConfig {
    let mut m = ModelConfig::new(kind, builtin("su2").unwrap());
    m.lines = lines;
    m
}

#[test]
fn cs3_derivation() {
    let r = verify_cme(&model(ModelKind::Cs3, 0)).unwrap();
    golden("cs3_su2.json", &r);
    let q = &r.data["q"];
    // Q γ = ½[γ,γ] for su2: (Qγ)_0 = γ_1 γ_2
    assert_eq!(q["γ_0"], "γ_1 γ_2");
    // Q A = dγ + [A,γ], ghosts ordered first: A_1 γ_2 = −γ_2 A_1
    assert_eq!(q["A_0"], "dγ_0 + γ_1 A_2 - γ_2 A_1");
}

#[test]
fn cs1_wilson_boundary_derivation() {
    let r = derive_bfv(&model(ModelKind::Cs1, 1)).unwrap();
    golden("cs1_wilson_su2.json", &r);
    assert_eq!(r.data["pointSum"]["total"], "0");
}

#[test]
fn cs3_two_lines_boundary_derivation() {
    let r = derive_bfv(&model(ModelKind::Cs3, 2)).unwrap();
    golden("cs3_two_lines_su2.json", &r);
    let signs: Vec<&str> = r.data["points"].as_array().unwrap().iter().map(|p| p["sign"].as_str().unwrap()).collect();
    assert_eq!(signs, ["1", "-1", "1", "-1"]);
}

#[test]
fn dirac_matrix_spin_half() {
    let r = dirac(&DiracConfig::new(builtin("su2").unwrap(), "0.5", int(1))).unwrap();
    golden("dirac_su2_half.json", &r);
    // X̂_a = −(i/2)σ_a, γ_a = σ_a: Σ σ_a⊗σ_a = 2·SWAP − 1 and the cubic term
    // is −(1/6)(1/2)·6i, so 𝔇/√(1/2) = −i·SWAP.
    let m = &r.data["matrix"]["entries"];
    let swap = [0usize, 2, 1, 3];
    for (i, row) in m.as_array().unwrap().iter().enumerate() {
        for (j, v) in row.as_array().unwrap().iter().enumerate() {
            let want = if swap[i] == j { "-1i" } else { "0" };
            assert_eq!(v, &Value::from(want), "entry ({i},{j})");
        }
    }
    assert_eq!(r.data["c"], "-1/2");
}
