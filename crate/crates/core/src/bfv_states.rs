//! Boundary state spaces, quantised boundary charges and their cohomology
//! for the one-dimensional model, plus the insertion algebra and constraint
//! symbol of the three-dimensional point sector.
//!
//! Every factor is `V ⊗ S` with the graded spinor module, so that the
//! fermion parity is available for Koszul signs. An odd operator on factor
//! `k` is embedded as `P ⊗ … ⊗ P ⊗ O ⊗ 1 ⊗ … ⊗ 1`.
//!
//! If `Ŝ² = c·1` with `c ≠ 0` then `h = Ŝ/(2c)` satisfies `Ŝh + hŜ = 1`,
//! so every closed vector `v = Ŝ(hv) + h(Ŝv) = Ŝ(hv)` is exact and the
//! cohomology vanishes in both parities.

use std::fmt;

use num_traits::{One, Zero};

use crate::lie::{check_rep, extract_structure_constants, LieAlgebra, Representation};
use crate::matrix::QMat;
use crate::scalar::{greal, int, Rational};
use crate::weil::{cubic_dirac, graded_spinor_rep, DiracOperator};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct BoundaryPoint {
    pub label: String,
    /// `+1` or `−1`.
    pub sign: i32,
    pub rep: Representation,
}

impl BoundaryPoint {
    pub fn new(label: &str, sign: i32, rep: Representation) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Config(format!("point `{label}` has sign {sign}, expected ±1")));
        }
        Ok(BoundaryPoint { label: label.to_string(), sign, rep })
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryHilbert {
    pub points: Vec<BoundaryPoint>,
    /// One Dirac operator per point, acting on its own `V ⊗ S`.
    pub dirac: Vec<DiracOperator>,
    pub dims: Vec<usize>,
    /// Parity of each factor.
    pub factor_parity: Vec<QMat>,
    /// Parity of the whole space, `⊗_k P_k`.
    pub parity: QMat,
    pub hbar: Rational,
}

pub fn boundary_space(points: &[BoundaryPoint]) -> Result<BoundaryHilbert> {
    let first = points.first().ok_or_else(|| Error::Config("boundary has no points".into()))?;
    let hbar = first.rep.hbar.clone();
    let mut dirac = Vec::new();
    let mut factor_parity = Vec::new();
    for p in points {
        if p.rep.hbar != hbar {
            return Err(Error::Config(format!("point `{}` uses ħ = {}, expected {}", p.label, p.rep.hbar, hbar)));
        }
        let l = &p.rep.algebra;
        let d = cubic_dirac(l, &p.rep, &graded_spinor_rep(l, hbar.clone()))?;
        factor_parity.push(d.parity().expect("graded spinor module carries a parity"));
        dirac.push(d);
    }
    let dims: Vec<usize> = dirac.iter().map(|d| d.dim()).collect();
    let parity = factor_parity.iter().skip(1).fold(factor_parity[0].clone(), |acc, p| acc.kron(p));
    Ok(BoundaryHilbert { points: points.to_vec(), dirac, dims, factor_parity, parity, hbar })
}

impl BoundaryHilbert {
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Extends an operator on factor `k` to the whole space.
    pub fn embed(&self, k: usize, op: &QMat, odd: bool) -> Result<QMat> {
        if k >= self.dims.len() {
            return Err(Error::Dimension(format!("factor {k} of {}", self.dims.len())));
        }
        if op.rows() != self.dims[k] || op.cols() != self.dims[k] {
            return Err(Error::Dimension(format!("operator is {}×{}, factor {k} has dimension {}", op.rows(), op.cols(), self.dims[k])));
        }
        let mut out = QMat::identity(1);
        for (i, d) in self.dims.iter().enumerate() {
            let f = match i.cmp(&k) {
                std::cmp::Ordering::Less if odd => self.factor_parity[i].clone(),
                std::cmp::Ordering::Equal => op.clone(),
                _ => QMat::identity(*d),
            };
            out = out.kron(&f);
        }
        Ok(out)
    }

    /// Indices of the even and odd basis vectors; the parity is diagonal.
    fn parity_split(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.dim();
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.parity.get(i, j).is_zero() {
                    return Err(Error::Precondition("parity operator is not diagonal".into()));
                }
            }
            let v = self.parity.get(i, i);
            if *v == greal(int(1)) {
                even.push(i);
            } else if *v == greal(int(-1)) {
                odd.push(i);
            } else {
                return Err(Error::Precondition("parity eigenvalue is not ±1".into()));
            }
        }
        Ok((even, odd))
    }
}

/// `Ŝ_∂ = √(ħ/2) · m` with `m = Σ_k s_k m_k` embedded with Koszul signs.
#[derive(Clone, Debug)]
pub struct BoundaryCharge {
    pub m: QMat,
    pub scale_sq: Rational,
}

impl BoundaryCharge {
    /// `Ŝ²`, exact.
    pub fn square(&self) -> QMat {
        self.m.mul(&self.m).scale_real(&self.scale_sq)
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
}

pub fn bfv_charge(h: &BoundaryHilbert) -> Result<BoundaryCharge> {
    let mut m = QMat::zeros(h.dim(), h.dim());
    for (k, (p, d)) in h.points.iter().zip(&h.dirac).enumerate() {
        let e = h.embed(k, &d.m, true)?;
        m = m.add(&e.scale_real(&int(p.sign as i64)));
    }
    Ok(BoundaryCharge { m, scale_sq: &h.hbar / int(2) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    NotNilpotent,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Trivial => "trivial",
            Verdict::Nontrivial => "nontrivial",
            Verdict::NotNilpotent => "notNilpotent",
        }
    }
}

/// Dimensions split as `[even, odd]`.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    /// `c` with `Ŝ² = c·1`, when the square is scalar.
    pub charge_squared_scalar: Option<Rational>,
    /// Largest entry of `Ŝ² − c·1` (of `Ŝ²` off the diagonal when not scalar).
    pub off_scalar_residual: f64,
    pub space_dim: [usize; 2],
    pub kernel_dim: [usize; 2],
    pub image_dim: [usize; 2],
    pub cohomology_dim: Option<[usize; 2]>,
    /// `Ŝh + hŜ = 1` for `h = Ŝ/(2c)`; only meaningful when `c ≠ 0`.
    pub homotopy_ok: Option<bool>,
    pub verdict: Verdict,
}

pub fn cohomology(h: &BoundaryHilbert, q: &BoundaryCharge) -> Result<CohomologyReport> {
    let n = h.dim();
    if q.m.rows() != n || q.m.cols() != n {
        return Err(Error::Dimension(format!("charge is {}×{}, space has dimension {n}", q.m.rows(), q.m.cols())));
    }
    if !h.parity.anticommutator(&q.m).is_zero() {
        return Err(Error::Precondition("charge is not odd".into()));
    }
    let (even, odd) = h.parity_split()?;
    // the charge maps even to odd and odd to even
    let from_even = q.m.submatrix(&odd, &even).rank();
    let from_odd = q.m.submatrix(&even, &odd).rank();
    let kernel_dim = [even.len() - from_even, odd.len() - from_odd];
    let image_dim = [from_odd, from_even];
    let sq = q.square();
    let scalar = sq.as_scalar();
    let (c, residual) = match &scalar {
        Some(z) if z.im.is_zero() => (Some(z.re.clone()), 0.0),
        _ => {
            let diag = sq.get(0, 0).clone();
            let r = sq.sub(&QMat::identity(n).scale(&diag)).max_abs();
            (None, r)
        }
    };
    let (verdict, cohomology_dim, homotopy_ok) = match &c {
        Some(c) if c.is_zero() => {
            let hd = [kernel_dim[0] - image_dim[0], kernel_dim[1] - image_dim[1]];
            let v = if hd == [0, 0] { Verdict::Trivial } else { Verdict::Nontrivial };
            (v, Some(hd), None)
        }
        Some(c) => {
            // Ŝh + hŜ = Ŝ²/c; a contracting homotopy kills both parities
            let ok = sq.scale_real(&(Rational::one() / c)) == QMat::identity(n);
            (Verdict::Trivial, ok.then_some([0, 0]), Some(ok))
        }
        None => (Verdict::NotNilpotent, None, None),
    };
    Ok(CohomologyReport {
        charge_squared_scalar: c,
        off_scalar_residual: residual,
        space_dim: [even.len(), odd.len()],
        kernel_dim,
        image_dim,
        cohomology_dim,
        homotopy_ok,
        verdict,
    })
}

#[derive(Clone, Debug)]
pub struct InsertionEntry {
    pub label: String,
    pub ok: bool,
    /// First pair `(a, b)` with a failing commutator.
    pub witness: Option<(usize, usize)>,
    pub max_violation: f64,
    /// Structure constants read off from the matrices.
    pub extracted: Option<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct InsertionReport {
    pub entries: Vec<InsertionEntry>,
    /// Every representation yields the same structure constants, equal to
    /// those of the algebra.
    pub consistent: bool,
}

impl InsertionReport {
    pub fn ok(&self) -> bool {
        self.consistent && self.entries.iter().all(|e| e.ok)
    }
}

fn dense_f(l: &LieAlgebra) -> Vec<Rational> {
    let n = l.dim();
    let mut out = Vec::with_capacity(n * n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                out.push(l.f(a, b, c).clone());
            }
        }
    }
    out
}

pub fn insertion_algebra_check(reps: &[Representation]) -> Result<InsertionReport> {
    let mut entries = Vec::new();
    let mut consistent = true;
    for r in reps {
        let rr = check_rep(&r.algebra, r)?;
        let extracted = extract_structure_constants(r);
        if extracted.as_ref() != Some(&dense_f(&r.algebra)) {
            consistent = false;
        }
        entries.push(InsertionEntry { label: r.label.clone(), ok: rr.ok, witness: rr.witness, max_violation: rr.max_violation, extracted });
    }
    if let Some(first) = entries.first() {
        consistent &= entries.iter().all(|e| e.extracted == first.extracted);
    }
    Ok(InsertionReport { entries, consistent })
}

/// A Wilson line with endpoints `z` (start) and `z'` (end).
#[derive(Clone, Debug)]
pub struct LineInsertion {
    pub label: String,
    pub rep_label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTerm {
    pub sign: i32,
    pub text: String,
}

impl fmt::Display for SymbolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.sign > 0 { "+" } else { "-" }, self.text)
    }
}

/// Gauss-law operator on boundary states: bulk part plus signed point
/// sources `−ρ_k(X̂_a) δ_{z_k} t^a + ρ_k(X̂_a) δ_{z'_k} t^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSymbol {
    pub bulk: Vec<SymbolTerm>,
    pub points: Vec<SymbolTerm>,
}

impl ConstraintSymbol {
    pub fn term_count(&self) -> usize {
        self.bulk.len() + self.points.len()
    }

    /// The ghost-linear part of the boundary charge,
    /// `−∫ (constraint, γ)`, term by term.
    pub fn ghost_pairing(&self) -> Vec<SymbolTerm> {
        self.bulk.iter().chain(&self.points).map(|t| SymbolTerm { sign: -t.sign, text: format!("({}, γ)", t.text) }).collect()
    }
}

impl fmt::Display for ConstraintSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<String> = self.bulk.iter().chain(&self.points).map(|t| t.to_string()).collect();
        write!(f, "{}", all.join(" "))
    }
}

pub fn constraint_symbol(lines: &[LineInsertion]) -> ConstraintSymbol {
    let bulk = ["∂a", "∂̄(δ/δa)", "[a, δ/δa]"].iter().map(|t| SymbolTerm { sign: 1, text: t.to_string() }).collect();
    let mut points = Vec::new();
    for l in lines {
        let rho = format!("ρ_{}(X̂_a)", l.rep_label);
        points.push(SymbolTerm { sign: -1, text: format!("{rho} δ_{{{}}} t^a", l.label) });
        points.push(SymbolTerm { sign: 1, text: format!("{rho} δ_{{{}'}} t^a", l.label) });
    }
    ConstraintSymbol { bulk, points }
}

/// Parses `+su2:0.5` style point descriptors: sign, builtin algebra and a
/// representation accepted by [`parse_rep`](crate::lie::parse_rep).
pub fn parse_point(s: &str, hbar: &Rational, index: usize) -> Result<BoundaryPoint> {
    let (sign, rest) = match s.chars().next() {
        Some('+') => (1, &s[1..]),
        Some('-') => (-1, &s[1..]),
        _ => return Err(Error::Config(format!("point `{s}` must start with + or -"))),
    };
    let (alg, rep) = rest.rsplit_once(':').ok_or_else(|| Error::Config(format!("point `{s}` must look like +su2:0.5")))?;
    let (alg, rep) = match rep.parse::<usize>() {
        // `triv:n` splits one colon too late
        Ok(_) if alg.ends_with(":triv") => (&alg[..alg.len() - 5], &rest[alg.len() - 4..]),
        _ => (alg, rep),
    };
    let l = crate::lie::builtin(alg)?;
    let r = crate::lie::parse_rep(&l, rep, hbar)?;
    BoundaryPoint::new(&format!("p{index}"), sign, r)
}
