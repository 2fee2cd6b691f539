mod common;

use bvbfv::lie::{builtin, check_jacobi, LieAlgebra};
use bvbfv::report::{mutated_algebra, CME_ALGEBRAS};
use bvbfv::variational::{build_cs1, build_cs3, check_cme};
use common::{axioms, even, homogeneous, normal_form_laws, odd, Raw, LETTERS};
use proptest::prelude::*;

fn raw() -> impl Strategy<Value = Raw> {
    prop::collection::vec((prop::collection::vec(0usize..LETTERS, 0..4), -3i64..=3), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn antibracket_axioms(a in raw(), b in raw(), c in raw()) {
        let br = odd();
        axioms(&br, &homogeneous(&br, &a), &homogeneous(&br, &b), &homogeneous(&br, &c)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn poisson_bracket_axioms(a in raw(), b in raw(), c in raw()) {
        let br = even();
        axioms(&br, &homogeneous(&br, &a), &homogeneous(&br, &b), &homogeneous(&br, &c)).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn normal_form_is_a_projection(words in prop::collection::vec((prop::collection::vec(0usize..12, 2..4), -2i64..=2), 1..4)) {
        let m = build_cs3(&builtin("su2").unwrap()).unwrap();
        normal_form_laws(&m, &words).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn master_equation_on_quadratic_algebras() {
    for name in CME_ALGEBRAS {
        let l = builtin(name).unwrap();
        assert!(check_cme(&build_cs3(&l).unwrap()).unwrap().ok, "cs3 {name}");
        assert!(check_cme(&build_cs1(&l).unwrap()).unwrap().ok, "cs1 {name}");
    }
}

#[test]
fn direct_sums_stay_quadratic() {
    let l: LieAlgebra = builtin("su2").unwrap().direct_sum(&builtin("so3").unwrap());
    assert_eq!(l.dim(), 6);
    assert!(check_jacobi(&l).ok);
    assert!(check_cme(&build_cs3(&l).unwrap()).unwrap().ok);
}

#[test]
fn jacobi_violation_breaks_the_master_equation() {
    let l = mutated_algebra().unwrap();
    assert!(!check_jacobi(&l).ok);
    let r = check_cme(&build_cs3(&l).unwrap()).unwrap();
    assert!(!r.ok);
    assert!(r.strata.values().any(|s| !s.residue.is_zero()));
}
