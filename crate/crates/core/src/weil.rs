//! Clifford algebra, spinor modules and the cubic Dirac operator.
//!
//! Fermions are stored as gamma matrices with `γ_aγ_b + γ_bγ_a = 2δ_ab`.
//! The quantised fermions are `ψ̂_a = √(ħ/2)·γ_a`, so an operator of odd
//! fermion degree is kept as `√(ħ/2)` times an exact matrix and its square
//! is exact again.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::lie::{LieAlgebra, Representation};
use crate::matrix::QMat;
use crate::scalar::{gi, gone, greal, gzero, int, rat, to_f64, Rational};
use crate::{Error, Result};

/// Spinor module of `Cl(g)` with gamma matrices `γ_a`.
#[derive(Clone, Debug)]
pub struct CliffordRep {
    pub algebra: LieAlgebra,
    pub hbar: Rational,
    pub dim_s: usize,
    pub gamma: Vec<QMat>,
    /// Fermion parity, present when the module is graded.
    pub parity: Option<QMat>,
}

impl CliffordRep {
    /// `ħ/2`, the square of the factor relating `ψ̂_a` to `γ_a`.
    pub fn psi_sq(&self) -> Rational {
        &self.hbar / int(2)
    }

    /// `ψ̂_aψ̂_b + ψ̂_bψ̂_a = ħ δ_ab`, exactly.
    pub fn anticommutation_ok(&self) -> bool {
        let n = self.gamma.len();
        let id = QMat::identity(self.dim_s);
        (0..n).all(|a| {
            (a..n).all(|b| {
                let ac = self.gamma[a].anticommutator(&self.gamma[b]).scale_real(&self.psi_sq());
                let want = if a == b { id.scale_real(&self.hbar) } else { QMat::zeros(self.dim_s, self.dim_s) };
                ac == want
            })
        })
    }

    /// `ψ̂_a` in floating point.
    pub fn psi_c64(&self, a: usize) -> DMatrix<Complex<f64>> {
        self.gamma[a].to_c64() * Complex::new(to_f64(&self.psi_sq()).sqrt(), 0.0)
    }

    /// `ψ̂_bψ̂_c = (ħ/2) γ_bγ_c`, exact.
    pub fn psi_pair(&self, b: usize, c: usize) -> QMat {
        self.gamma[b].mul(&self.gamma[c]).scale_real(&self.psi_sq())
    }
}

fn pauli() -> [QMat; 3] {
    let x = QMat::from_fn(2, 2, |r, c| if r != c { gone() } else { gzero() });
    let y = QMat::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => -gi(),
        (1, 0) => gi(),
        _ => gzero(),
    });
    let z = QMat::from_fn(2, 2, |r, c| match (r, c) {
        (0, 0) => gone(),
        (1, 1) => greal(int(-1)),
        _ => gzero(),
    });
    [x, y, z]
}

fn kron_all(ms: &[QMat]) -> QMat {
    ms.iter().fold(QMat::identity(1), |acc, m| acc.kron(m))
}

/// Jordan-Wigner gammas on `m` qubits: `Z^{⊗k} ⊗ X ⊗ 1` and `Z^{⊗k} ⊗ Y ⊗ 1`.
fn jordan_wigner(m: usize) -> Vec<QMat> {
    let [x, y, z] = pauli();
    let id = QMat::identity(2);
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        for p in [&x, &y] {
            let factors: Vec<QMat> = (0..m)
                .map(|i| {
                    if i < k {
                        z.clone()
                    } else if i == k {
                        p.clone()
                    } else {
                        id.clone()
                    }
                })
                .collect();
            out.push(kron_all(&factors));
        }
    }
    out
}

fn jw_parity(m: usize) -> QMat {
    let [_, _, z] = pauli();
    kron_all(&vec![z; m])
}

/// Irreducible Clifford module of dimension `2^⌊n/2⌋`. For odd `n` the last
/// gamma is the chirality element of the others, normalised so that su2
/// gets the Pauli matrices; such a module carries no parity.
pub fn spinor_rep(l: &LieAlgebra, hbar: Rational) -> CliffordRep {
    let n = l.dim();
    let m = n / 2;
    let mut gamma = jordan_wigner(m);
    let parity = if n % 2 == 1 {
        // (-i)^m γ_1 … γ_2m squares to 1 and anticommutes with each γ_k
        let mut chi = QMat::identity(1 << m);
        for g in &gamma {
            chi = chi.mul(g);
        }
        let mut phase = gone();
        for _ in 0..m {
            phase *= -gi();
        }
        gamma.push(chi.scale(&phase));
        None
    } else {
        Some(jw_parity(m))
    };
    CliffordRep { algebra: l.clone(), hbar, dim_s: 1 << m, gamma, parity }
}

/// Graded Clifford module on `⌈n/2⌉` qubits with parity `Z^{⊗m}`.
pub fn graded_spinor_rep(l: &LieAlgebra, hbar: Rational) -> CliffordRep {
    let n = l.dim();
    let m = n.div_ceil(2);
    let mut gamma = jordan_wigner(m);
    gamma.truncate(n);
    CliffordRep { algebra: l.clone(), hbar, dim_s: 1 << m, gamma, parity: Some(jw_parity(m)) }
}

/// `𝔇 = √(ħ/2) · m` acting on `V ⊗ S`.
#[derive(Clone, Debug)]
pub struct DiracOperator {
    pub rep: Representation,
    pub cliff: CliffordRep,
    pub m: QMat,
    pub hbar: Rational,
    /// Coefficient of the cubic term, `1/6` for the cubic Dirac operator.
    pub cubic: Rational,
}

impl DiracOperator {
    pub fn scale_sq(&self) -> Rational {
        &self.hbar / int(2)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    /// `𝔇²`, exact.
    pub fn square(&self) -> QMat {
        self.m.mul(&self.m).scale_real(&self.scale_sq())
    }

    pub fn to_c64(&self) -> DMatrix<Complex<f64>> {
        self.m.to_c64() * Complex::new(to_f64(&self.scale_sq()).sqrt(), 0.0)
    }

    /// `X̂_a ⊗ 1`.
    pub fn x_op(&self, a: usize) -> QMat {
        self.rep.x_hat(a).kron(&QMat::identity(self.cliff.dim_s))
    }

    /// `1 ⊗ γ_a`.
    pub fn gamma_op(&self, a: usize) -> QMat {
        QMat::identity(self.rep.dim_v).kron(&self.cliff.gamma[a])
    }

    /// `Ĝ_a = X̂_a ⊗ 1 − ½ Σ f_abc 1 ⊗ ψ̂_bψ̂_c`.
    pub fn diagonal_generator(&self, a: usize) -> QMat {
        let l = &self.cliff.algebra;
        let mut spin = QMat::zeros(self.cliff.dim_s, self.cliff.dim_s);
        for (x, b, c, f) in l.nonzero() {
            if x == a {
                spin = spin.add(&self.cliff.psi_pair(b, c).scale_real(&f));
            }
        }
        let spin = QMat::identity(self.rep.dim_v).kron(&spin).scale_real(&rat(-1, 2));
        self.x_op(a).add(&spin)
    }

    /// `1 ⊗ P` when the spinor module is graded.
    pub fn parity(&self) -> Option<QMat> {
        self.cliff.parity.as_ref().map(|p| QMat::identity(self.rep.dim_v).kron(p))
    }
}

pub fn cubic_dirac(l: &LieAlgebra, r: &Representation, cliff: &CliffordRep) -> Result<DiracOperator> {
    cubic_dirac_with(l, r, cliff, rat(1, 6))
}

/// `𝔇 = X̂_a ⊗ ψ̂_a − k Σ f_abc ψ̂_aψ̂_bψ̂_c` for a cubic coefficient `k`.
pub fn cubic_dirac_with(l: &LieAlgebra, r: &Representation, cliff: &CliffordRep, k: Rational) -> Result<DiracOperator> {
    if r.algebra != *l || cliff.algebra != *l {
        return Err(Error::Config(format!("representation, spinors and algebra `{}` do not match", l.name())));
    }
    if r.hbar != cliff.hbar {
        return Err(Error::Config(format!("ħ differs: representation {} vs spinors {}", r.hbar, cliff.hbar)));
    }
    let dv = r.dim_v;
    let ds = cliff.dim_s;
    let mut m = QMat::zeros(dv * ds, dv * ds);
    for a in 0..l.dim() {
        m = m.add(&r.x_hat(a).kron(&cliff.gamma[a]));
    }
    let mut cubic = QMat::zeros(ds, ds);
    for (a, b, c, f) in l.nonzero() {
        let ggg = cliff.gamma[a].mul(&cliff.gamma[b]).mul(&cliff.gamma[c]);
        cubic = cubic.add(&ggg.scale_real(&f));
    }
    // ψ̂ψ̂ψ̂ = (ħ/2)^{3/2} γγγ; one factor √(ħ/2) is pulled out
    let coeff = -(&k * &cliff.psi_sq());
    m = m.add(&QMat::identity(dv).kron(&cubic).scale_real(&coeff));
    Ok(DiracOperator { rep: r.clone(), cliff: cliff.clone(), m, hbar: r.hbar.clone(), cubic: k })
}

#[derive(Clone, Debug)]
pub struct SquareReport {
    /// `c` with `𝔇² = c·Id`, when the square is scalar.
    pub c: Option<Rational>,
    /// `𝔇² = (ħ/2) Σ X̂_aX̂_a − (ħ³/48) Σ f² · Id`.
    pub identity_ok: bool,
    /// The same identity with the ħ weights dropped.
    pub literal_ok: bool,
    pub max_off_identity_err: f64,
}

fn scalar_real(m: &QMat) -> Option<Rational> {
    m.as_scalar().filter(|z| z.im.is_zero()).map(|z| z.re)
}

/// Expected value of `𝔇²` with explicit ħ weights.
pub fn dirac_square_expected(d: &DiracOperator) -> QMat {
    let ds = d.cliff.dim_s;
    let cas = d.rep.casimir().kron(&QMat::identity(ds));
    let h = &d.hbar;
    let f2 = d.cliff.algebra.f_squared();
    let konst = -(h * h * h * f2 / int(48));
    cas.scale_real(&(h / int(2))).add(&QMat::identity(d.dim()).scale_real(&konst))
}

pub fn dirac_square_check(d: &DiracOperator) -> SquareReport {
    let sq = d.square();
    let diff = sq.sub(&dirac_square_expected(d));
    let ds = d.cliff.dim_s;
    let literal = d
        .rep
        .casimir()
        .kron(&QMat::identity(ds))
        .scale_real(&rat(1, 2))
        .add(&QMat::identity(d.dim()).scale_real(&-(d.cliff.algebra.f_squared() / int(48))));
    SquareReport { c: scalar_real(&sq), identity_ok: diff.is_zero(), literal_ok: sq == literal, max_off_identity_err: diff.max_abs() }
}

/// Floating-point variant: `‖𝔇² − expected‖_max`.
pub fn dirac_square_check_f64(d: &DiracOperator, tol: f64) -> (bool, f64) {
    let dd = d.to_c64();
    let sq = &dd * &dd;
    let err = (sq - dirac_square_expected(d).to_c64()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    (err <= tol, err)
}

#[derive(Clone, Debug)]
pub struct CentralityReport {
    pub ok: bool,
    pub max_err: f64,
    /// Operators that fail to commute with `𝔇²`.
    pub failures: Vec<String>,
}

/// Commutators of `𝔇²` with `Ĝ_a`, `X̂_a ⊗ 1`, `1 ⊗ ψ̂_a` and `𝔇`.
pub fn centrality_check(d: &DiracOperator) -> CentralityReport {
    let sq = d.square();
    let n = d.cliff.algebra.dim();
    let mut ops: Vec<(String, QMat)> = Vec::new();
    for a in 0..n {
        ops.push((format!("G{a}"), d.diagonal_generator(a)));
        ops.push((format!("X{a}"), d.x_op(a)));
        ops.push((format!("psi{a}"), d.gamma_op(a)));
    }
    ops.push(("D".into(), d.m.clone()));
    let mut failures = Vec::new();
    let mut max_err = 0.0f64;
    for (name, op) in ops {
        let c = sq.commutator(&op);
        if !c.is_zero() {
            max_err = max_err.max(c.max_abs());
            failures.push(name);
        }
    }
    CentralityReport { ok: failures.is_empty(), max_err, failures }
}

/// `[Ĝ_a, Ĝ_b] = ħ Σ f_abc Ĝ_c`.
pub fn diagonal_action_ok(d: &DiracOperator) -> bool {
    let l = &d.cliff.algebra;
    let g: Vec<QMat> = (0..l.dim()).map(|a| d.diagonal_generator(a)).collect();
    (0..l.dim()).all(|a| {
        (0..l.dim()).all(|b| {
            let mut rhs = QMat::zeros(d.dim(), d.dim());
            for c in 0..l.dim() {
                let f = l.f(a, b, c);
                if !f.is_zero() {
                    rhs = rhs.add(&g[c].scale_real(&(f * &d.hbar)));
                }
            }
            g[a].commutator(&g[b]) == rhs
        })
    })
}

/// `𝔇 P + P 𝔇 = 0`; `None` for an ungraded spinor module.
pub fn is_odd(d: &DiracOperator) -> Option<bool> {
    d.parity().map(|p| p.anticommutator(&d.m).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, rep_su2};

    #[test]
    fn su2_spinors_are_pauli_matrices() {
        let l = builtin("su2").unwrap();
        let c = spinor_rep(&l, int(1));
        assert_eq!(c.dim_s, 2);
        assert_eq!(c.gamma, pauli().to_vec());
        assert!(c.anticommutation_ok());
        assert!(c.parity.is_none());
    }

    #[test]
    fn graded_modules_have_anticommuting_parity() {
        for n in 1..=5 {
            let l = builtin(&format!("abelian({n})")).unwrap();
            let c = graded_spinor_rep(&l, int(3));
            assert!(c.anticommutation_ok());
            let p = c.parity.clone().unwrap();
            assert_eq!(p.mul(&p), QMat::identity(c.dim_s));
            assert!(c.gamma.iter().all(|g| p.anticommutator(g).is_zero()));
            assert!(p.trace().is_zero());
        }
    }

    #[test]
    fn one_generator_is_scalar() {
        let l = builtin("abelian(1)").unwrap();
        let c = spinor_rep(&l, int(1));
        assert_eq!(c.dim_s, 1);
        assert!(c.anticommutation_ok());
    }

    #[test]
    fn dirac_square_su2() {
        let l = builtin("su2").unwrap();
        for two_j in 0..=4 {
            for hb in [int(1), int(2), rat(1, 3)] {
                let r = rep_su2(two_j, hb.clone());
                let c = graded_spinor_rep(&l, hb.clone());
                let d = cubic_dirac(&l, &r, &c).unwrap();
                let rep = dirac_square_check(&d);
                assert!(rep.identity_ok, "j={two_j}/2 ħ={hb}");
                let j = rat(two_j as i64, 2);
                let want = -(&hb * &hb * &hb) * (&j * (&j + int(1)) / int(2) + rat(1, 8));
                assert_eq!(rep.c, Some(want));
                assert!(centrality_check(&d).ok);
                assert!(diagonal_action_ok(&d));
                assert_eq!(is_odd(&d), Some(true));
            }
        }
    }

    #[test]
    fn perturbed_cubic_term_is_not_central() {
        let l = builtin("su2").unwrap();
        let r = rep_su2(1, int(1));
        let d = cubic_dirac_with(&l, &r, &spinor_rep(&l, int(1)), rat(1, 5)).unwrap();
        let c = centrality_check(&d);
        assert!(!c.ok);
        assert!(c.failures.iter().any(|f| f.starts_with("psi")));
        assert!(!dirac_square_check(&d).identity_ok);
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let l = builtin("su2").unwrap();
        let r = rep_su2(1, int(1));
        assert!(cubic_dirac(&l, &r, &spinor_rep(&l, int(2))).is_err());
        let so3 = builtin("abelian(3)").unwrap();
        assert!(cubic_dirac(&so3, &r, &spinor_rep(&so3, int(1))).is_err());
    }

    #[test]
    fn float_square_agrees() {
        let l = builtin("su2").unwrap();
        let d = cubic_dirac(&l, &rep_su2(2, int(1)), &spinor_rep(&l, int(1))).unwrap();
        let (ok, err) = dirac_square_check_f64(&d, 1e-12);
        assert!(ok, "{err}");
    }
}
