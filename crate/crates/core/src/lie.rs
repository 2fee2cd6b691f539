//! Quadratic Lie algebras in an orthonormal basis and exact matrix
//! representations.
//!
//! Structure constants are stored densely as `f[a][b][c]` with
//! `[t_a, t_b] = Σ_c f[a][b][c] t_c`. Because the basis is orthonormal for the
//! invariant form, ad-invariance of the form is the same as total
//! antisymmetry of `f`.

use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::matrix::QMat;
use crate::scalar::{gi, greal, gzero, int, parse_rational, rat, GaussRational, Rational};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    f: Vec<Rational>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.name, self.dim)
    }
}

/// Names accepted by [`make_builtin`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Su2,
    So3,
    Abelian(usize),
    DirectSum(Vec<Builtin>),
}

impl Builtin {
    /// Parses `su2`, `so3`, `abelian(n)` and `+`-separated direct sums such
    /// as `su2+abelian(1)`.
    pub fn parse(s: &str) -> Result<Builtin> {
        let s = s.trim();
        if s.contains('+') {
            let parts = s.split('+').map(Builtin::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Builtin::DirectSum(parts));
        }
        match s {
            "su2" => Ok(Builtin::Su2),
            "so3" => Ok(Builtin::So3),
            _ => {
                let inner = s
                    .strip_prefix("abelian(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix("abelian"))
                    .ok_or_else(|| Error::Config(format!("unknown algebra `{s}`")))?;
                let n: usize = inner.parse().map_err(|_| Error::Config(format!("bad abelian dimension in `{s}`")))?;
                Ok(Builtin::Abelian(n))
            }
        }
    }
}

fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

pub fn make_builtin(b: &Builtin) -> Result<LieAlgebra> {
    match b {
        Builtin::Su2 | Builtin::So3 => {
            let name = if *b == Builtin::Su2 { "su2" } else { "so3" };
            let mut l = LieAlgebra::zero(name, 3);
            for a in 0..3 {
                for bb in 0..3 {
                    for c in 0..3 {
                        l.f[(a * 3 + bb) * 3 + c] = int(levi_civita(a, bb, c));
                    }
                }
            }
            Ok(l)
        }
        Builtin::Abelian(n) => {
            if *n == 0 {
                return Err(Error::Config("abelian algebra needs n >= 1".into()));
            }
            Ok(LieAlgebra::zero(&format!("abelian({n})"), *n))
        }
        Builtin::DirectSum(parts) => {
            if parts.is_empty() {
                return Err(Error::Config("empty direct sum".into()));
            }
            let algs = parts.iter().map(make_builtin).collect::<Result<Vec<_>>>()?;
            let mut out = algs[0].clone();
            for a in &algs[1..] {
                out = out.direct_sum(a);
            }
            Ok(out)
        }
    }
}

/// Convenience wrapper: parse a name and build it.
pub fn builtin(name: &str) -> Result<LieAlgebra> {
    make_builtin(&Builtin::parse(name)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobiReport {
    pub ok: bool,
    pub max_violation: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub ok: bool,
    /// First index triple where `f[a][b][c] != -f[a][c][b]`, if any.
    pub witness: Option<(usize, usize, usize)>,
}

impl LieAlgebra {
    pub fn zero(name: &str, dim: usize) -> Self {
        LieAlgebra { name: name.to_string(), dim, f: vec![Rational::zero(); dim * dim * dim] }
    }

    /// Builds an algebra from a dense `dim³` array without any checks.
    pub fn from_dense(name: &str, dim: usize, f: Vec<Rational>) -> Result<Self> {
        if f.len() != dim * dim * dim {
            return Err(Error::Dimension(format!("expected {} structure constants, got {}", dim * dim * dim, f.len())));
        }
        Ok(LieAlgebra { name: name.to_string(), dim, f })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.f[(a * self.dim + b) * self.dim + c]
    }

    pub fn set_f(&mut self, a: usize, b: usize, c: usize, v: Rational) {
        let d = self.dim;
        self.f[(a * d + b) * d + c] = v;
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().all(|x| x.is_zero())
    }

    /// Nonzero entries `(a, b, c, f_abc)` in lexicographic order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, Rational)> {
        let d = self.dim;
        let mut out = Vec::new();
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let v = self.f(a, b, c);
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Σ_{abc} f_abc², the normalisation constant entering the Dirac square.
    pub fn f_squared(&self) -> Rational {
        self.f.iter().fold(Rational::zero(), |acc, x| acc + x * x)
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (a, b, c, v) in self.nonzero() {
            out[c] += &v * &x[a] * &y[b];
        }
        out
    }

    pub fn bracket_f64(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (a, b, c, v) in self.nonzero() {
            out[c] += crate::scalar::to_f64(&v) * x[a] * y[b];
        }
        out
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let d = self.dim + other.dim;
        let mut out = LieAlgebra::zero(&format!("{}+{}", self.name, other.name), d);
        for (a, b, c, v) in self.nonzero() {
            out.set_f(a, b, c, v);
        }
        let o = self.dim;
        for (a, b, c, v) in other.nonzero() {
            out.set_f(a + o, b + o, c + o, v);
        }
        out
    }

    /// Adds `delta` to `f[a][b][c]` and `-delta` to `f[b][a][c]`.
    pub fn perturbed(&self, a: usize, b: usize, c: usize, delta: Rational) -> LieAlgebra {
        let mut out = self.clone();
        out.name = format!("{}~perturbed", self.name);
        let v = out.f(a, b, c) + &delta;
        out.set_f(a, b, c, v);
        let w = out.f(b, a, c) - &delta;
        out.set_f(b, a, c, w);
        out
    }

    /// Adds `±delta` to all six permutations of `(a, b, c)`, keeping `f`
    /// totally antisymmetric. Indices must be distinct.
    pub fn perturbed_total(&self, a: usize, b: usize, c: usize, delta: Rational) -> LieAlgebra {
        assert!(a != b && b != c && a != c, "indices must be distinct");
        let mut out = self.clone();
        out.name = format!("{}~perturbed", self.name);
        for (p, s) in [((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1), ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1)] {
            let v = out.f(p.0, p.1, p.2) + &delta * int(s);
            out.set_f(p.0, p.1, p.2, v);
        }
        out
    }

    pub fn load_json(path: &Path) -> Result<LieAlgebra> {
        let text = std::fs::read_to_string(path)?;
        LieAlgebra::from_json_str(&text)
    }

    /// Parses `{name, dim, f: [[a, b, c, value], ...]}`. Entries are
    /// completed by antisymmetry in the first two slots; contradicting
    /// entries are rejected.
    pub fn from_json_str(text: &str) -> Result<LieAlgebra> {
        let v: Value = serde_json::from_str(text)?;
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom").to_string();
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| Error::Config("algebra file needs a positive integer `dim`".into()))?
            as usize;
        if dim == 0 {
            return Err(Error::Config("algebra dimension must be positive".into()));
        }
        let mut l = LieAlgebra::zero(&name, dim);
        let mut set = vec![false; dim * dim * dim];
        let entries = v.get("f").and_then(Value::as_array).cloned().unwrap_or_default();
        for e in entries {
            let q = e
                .as_array()
                .filter(|q| q.len() == 4)
                .ok_or_else(|| Error::Config(format!("structure constant entry {e} is not [a,b,c,value]")))?;
            let idx: Vec<usize> = q[..3]
                .iter()
                .map(|x| x.as_u64().map(|u| u as usize).filter(|&u| u < dim))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Config(format!("index out of range in {e}")))?;
            let val = match &q[3] {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => None,
            }
            .ok_or_else(|| Error::Config(format!("bad value in {e}")))?;
            let (a, b, c) = (idx[0], idx[1], idx[2]);
            if a == b && !val.is_zero() {
                return Err(Error::Config(format!("f[{a}][{a}][{c}] must vanish")));
            }
            for (i, j, w) in [(a, b, val.clone()), (b, a, -val.clone())] {
                let k = (i * dim + j) * dim + c;
                if set[k] && l.f[k] != w {
                    return Err(Error::Config(format!("inconsistent entries for f[{i}][{j}][{c}]")));
                }
                set[k] = true;
                l.f[k] = w;
            }
        }
        Ok(l)
    }

    pub fn to_json(&self) -> Value {
        let f: Vec<Value> = self
            .nonzero()
            .into_iter()
            .filter(|(a, b, _, _)| a < b)
            .map(|(a, b, c, v)| serde_json::json!([a, b, c, v.to_string()]))
            .collect();
        serde_json::json!({ "name": self.name, "dim": self.dim, "f": f })
    }
}

pub fn check_jacobi(l: &LieAlgebra) -> JacobiReport {
    let d = l.dim;
    let mut max = Rational::zero();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                for dd in 0..d {
                    let mut s = Rational::zero();
                    for e in 0..d {
                        s += l.f(a, b, e) * l.f(e, c, dd) + l.f(b, c, e) * l.f(e, a, dd) + l.f(c, a, e) * l.f(e, b, dd);
                    }
                    let s = s.abs();
                    if s > max {
                        max = s;
                    }
                }
            }
        }
    }
    JacobiReport { ok: max.is_zero(), max_violation: max }
}

pub fn check_invariance(l: &LieAlgebra) -> InvarianceReport {
    let d = l.dim;
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                if *l.f(a, b, c) != -l.f(a, c, b) || *l.f(a, b, c) != -l.f(b, a, c) {
                    return InvarianceReport { ok: false, witness: Some((a, b, c)) };
                }
            }
        }
    }
    InvarianceReport { ok: true, witness: None }
}

/// A matrix representation `t_a ↦ rho_a`; the quantised generators are
/// `X̂_a = ħ·rho_a`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub algebra: LieAlgebra,
    pub dim_v: usize,
    pub rho: Vec<QMat>,
    pub hbar: Rational,
    pub label: String,
}

impl Representation {
    pub fn new(algebra: &LieAlgebra, rho: Vec<QMat>, hbar: Rational, label: &str) -> Result<Self> {
        if rho.len() != algebra.dim() {
            return Err(Error::Dimension(format!("{} matrices for an algebra of dimension {}", rho.len(), algebra.dim())));
        }
        let dim_v = rho.first().map(QMat::rows).unwrap_or(0);
        if rho.iter().any(|m| m.rows() != dim_v || m.cols() != dim_v) {
            return Err(Error::Dimension("representation matrices must be square of equal size".into()));
        }
        Ok(Representation { algebra: algebra.clone(), dim_v, rho, hbar, label: label.to_string() })
    }

    /// `X̂_a = ħ·rho_a`.
    pub fn x_hat(&self, a: usize) -> QMat {
        self.rho[a].scale_real(&self.hbar)
    }

    /// The zero representation on a `dim_v`-dimensional space.
    pub fn trivial(algebra: &LieAlgebra, dim_v: usize, hbar: Rational) -> Self {
        let rho = vec![QMat::zeros(dim_v, dim_v); algebra.dim()];
        Representation { algebra: algebra.clone(), dim_v, rho, hbar, label: format!("trivial({dim_v})") }
    }

    /// Adjoint representation: `(rho_a)_{cb} = f[a][b][c]`.
    pub fn adjoint(algebra: &LieAlgebra, hbar: Rational) -> Self {
        let d = algebra.dim();
        let rho = (0..d).map(|a| QMat::from_fn(d, d, |c, b| greal(algebra.f(a, b, c).clone()))).collect();
        Representation { algebra: algebra.clone(), dim_v: d, rho, hbar, label: "adjoint".into() }
    }

    /// Σ_a X̂_a X̂_a.
    pub fn casimir(&self) -> QMat {
        let mut acc = QMat::zeros(self.dim_v, self.dim_v);
        for a in 0..self.algebra.dim() {
            let x = self.x_hat(a);
            acc = acc.add(&x.mul(&x));
        }
        acc
    }
}

/// Spin-`j` representation of su2 in the basis `e_j, e_{j-1}, …, e_{-j}`
/// with `J_+ e_m = e_{m+1}` and `J_- e_{m+1} = (j-m)(j+m+1) e_m`, so every
/// entry is rational. `rho_a = -i J_a` and `[rho_a, rho_b] = ε_abc rho_c`.
pub fn rep_su2(two_j: u32, hbar: Rational) -> Representation {
    let n = two_j as usize + 1;
    let j = rat(two_j as i64, 2);
    // index k ↔ m = j - k
    let m_of = |k: usize| &j - int(k as i64);
    let jp = QMat::from_fn(n, n, |r, c| if r + 1 == c { greal(int(1)) } else { gzero() });
    let jm = QMat::from_fn(n, n, |r, c| {
        if c + 1 == r {
            // J_- e_{m+1} = (j-m)(j+m+1) e_m with m = m_of(r)
            let m = m_of(r);
            greal((&j - &m) * (&j + &m + int(1)))
        } else {
            gzero()
        }
    });
    let jz = QMat::from_fn(n, n, |r, c| if r == c { greal(m_of(r)) } else { gzero() });
    let half = greal(rat(1, 2));
    let jx = jp.add(&jm).scale(&half);
    // J_y = (J_+ - J_-)/(2i) = -i/2 (J_+ - J_-)
    let jy = jp.sub(&jm).scale(&(-gi() * &half));
    let minus_i: GaussRational = -gi();
    let rho = vec![jx.scale(&minus_i), jy.scale(&minus_i), jz.scale(&minus_i)];
    let su2 = make_builtin(&Builtin::Su2).expect("builtin");
    Representation { algebra: su2, dim_v: n, rho, hbar, label: format!("su2:j={}", j) }
}

/// Parses a spin such as `1/2`, `0.5` or `2` into `2j`.
pub fn parse_spin(s: &str) -> Result<u32> {
    let q = parse_rational(s).ok_or_else(|| Error::Config(format!("bad spin `{s}`")))?;
    let two = q * int(2);
    if !two.is_integer() || two.is_negative() {
        return Err(Error::Config(format!("spin `{s}` is not a nonnegative half-integer")));
    }
    num_traits::ToPrimitive::to_u32(two.numer()).ok_or_else(|| Error::Config(format!("spin `{s}` too large")))
}

/// Parses a representation descriptor: `adj`, `triv:n`, or a spin such as
/// `0.5` (su2 only).
pub fn parse_rep(l: &LieAlgebra, s: &str, hbar: &Rational) -> Result<Representation> {
    if s == "adj" {
        return Ok(Representation::adjoint(l, hbar.clone()));
    }
    if let Some(n) = s.strip_prefix("triv:") {
        let n: usize = n.parse().map_err(|_| Error::Config(format!("bad trivial dimension in `{s}`")))?;
        if n == 0 {
            return Err(Error::Config("trivial representation needs dimension >= 1".into()));
        }
        return Ok(Representation::trivial(l, n, hbar.clone()));
    }
    if l.name() != "su2" {
        return Err(Error::Config(format!("representation `{s}` is only available for su2; use adj or triv:n")));
    }
    Ok(rep_su2(parse_spin(s)?, hbar.clone()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepReport {
    pub ok: bool,
    pub max_violation: f64,
    /// First pair `(a, b)` with a failing commutator.
    pub witness: Option<(usize, usize)>,
}

/// Checks `[X̂_a, X̂_b] = ħ Σ_c f_abc X̂_c` exactly.
pub fn check_rep(l: &LieAlgebra, r: &Representation) -> Result<RepReport> {
    if r.rho.len() != l.dim() {
        return Err(Error::Dimension(format!("{} matrices for an algebra of dimension {}", r.rho.len(), l.dim())));
    }
    let x: Vec<QMat> = (0..l.dim()).map(|a| r.x_hat(a)).collect();
    let hb = greal(r.hbar.clone());
    let mut max = 0.0f64;
    let mut witness = None;
    for a in 0..l.dim() {
        for b in 0..l.dim() {
            let mut rhs = QMat::zeros(r.dim_v, r.dim_v);
            for c in 0..l.dim() {
                let f = l.f(a, b, c);
                if !f.is_zero() {
                    rhs = rhs.add(&x[c].scale(&(greal(f.clone()) * &hb)));
                }
            }
            let diff = x[a].commutator(&x[b]).sub(&rhs);
            if !diff.is_zero() {
                max = max.max(diff.max_abs());
                witness.get_or_insert((a, b));
            }
        }
    }
    Ok(RepReport { ok: witness.is_none(), max_violation: max, witness })
}

/// Reads off `f_abc` from a representation by solving
/// `[rho_a, rho_b] = Σ_c f_abc rho_c` in the span of the `rho_c`. Returns
/// `None` when the commutator is not in the span.
pub fn extract_structure_constants(r: &Representation) -> Option<Vec<Rational>> {
    use std::collections::BTreeMap;
    let d = r.rho.len();
    let n = r.dim_v;
    // unknowns c = 0..d; equations over real and imaginary parts of entries
    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut eq_index = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for part in 0..2 {
                let mut row = BTreeMap::new();
                for c in 0..d {
                    let z = r.rho[c].get(i, j);
                    let v = if part == 0 { z.re.clone() } else { z.im.clone() };
                    if !v.is_zero() {
                        row.insert(c, v);
                    }
                }
                rows.push(row);
                eq_index.push((i, j, part));
            }
        }
    }
    let mut out = vec![Rational::zero(); d * d * d];
    for a in 0..d {
        for b in 0..d {
            let comm = r.rho[a].commutator(&r.rho[b]);
            let rhs: Vec<Rational> =
                eq_index.iter().map(|&(i, j, p)| if p == 0 { comm.get(i, j).re.clone() } else { comm.get(i, j).im.clone() }).collect();
            if comm.is_zero() {
                continue;
            }
            let sol = crate::matrix::solve_rational(&rows, &rhs, d)?;
            for c in 0..d {
                out[(a * d + b) * d + c] = sol[c].clone();
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gone;

    #[test]
    fn builtins_are_valid() {
        for name in ["su2", "so3", "abelian(1)", "abelian(3)", "su2+abelian(1)"] {
            let l = builtin(name).unwrap();
            assert!(check_jacobi(&l).ok, "{name}");
            assert!(check_invariance(&l).ok, "{name}");
        }
        assert_eq!(builtin("su2+abelian(1)").unwrap().dim(), 4);
        assert!(builtin("e8").is_err());
        assert!(builtin("abelian(0)").is_err());
    }

    #[test]
    fn perturbed_algebra_breaks_jacobi() {
        let l = builtin("su2").unwrap().perturbed(0, 1, 0, int(1));
        let r = check_jacobi(&l);
        assert!(!r.ok);
        assert!(r.max_violation > Rational::zero());
    }

    #[test]
    fn half_antisymmetric_array_is_not_invariant() {
        let mut l = LieAlgebra::zero("x", 3);
        l.set_f(0, 1, 0, int(1));
        l.set_f(1, 0, 0, int(-1));
        assert!(!check_invariance(&l).ok);
    }

    #[test]
    fn spin_half_is_pauli() {
        // rho_a = -(i/2) sigma_a, so 2i·rho_a = sigma_a
        let r = rep_su2(1, int(1));
        let two_i = gi() * greal(int(2));
        let sigma: Vec<QMat> = r.rho.iter().map(|m| m.scale(&two_i)).collect();
        assert_eq!(sigma[0].get(0, 1), &gone());
        assert_eq!(sigma[0].get(1, 0), &gone());
        assert_eq!(sigma[1].get(0, 1), &-gi());
        assert_eq!(sigma[1].get(1, 0), &gi());
        assert_eq!(sigma[2].get(0, 0), &gone());
        assert_eq!(sigma[2].get(1, 1), &-gone());
    }

    #[test]
    fn casimir_values() {
        for two_j in 0..=4u32 {
            let r = rep_su2(two_j, int(1));
            assert!(check_rep(&r.algebra, &r).unwrap().ok);
            let j = rat(two_j as i64, 2);
            let expect = -(&j * (&j + int(1)));
            assert_eq!(r.casimir().as_scalar(), Some(greal(expect)));
        }
        let r = rep_su2(2, int(3));
        assert_eq!(r.casimir().as_scalar(), Some(greal(int(-18))));
    }

    #[test]
    fn flipped_sign_detected() {
        let mut r = rep_su2(1, int(1));
        r.rho[1] = r.rho[1].neg();
        let rep = check_rep(&r.algebra.clone(), &r).unwrap();
        assert!(!rep.ok);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn json_roundtrip_and_rejects() {
        let l = builtin("su2").unwrap();
        let text = l.to_json().to_string();
        assert_eq!(LieAlgebra::from_json_str(&text).unwrap().f, l.f);
        let bad = r#"{"name":"x","dim":2,"f":[[0,1,0,1],[1,0,0,1]]}"#;
        assert!(LieAlgebra::from_json_str(bad).is_err());
        let out_of_range = r#"{"dim":2,"f":[[0,2,0,1]]}"#;
        assert!(LieAlgebra::from_json_str(out_of_range).is_err());
    }

    #[test]
    fn extract_matches_epsilon() {
        for two_j in 1..=2 {
            let f = extract_structure_constants(&rep_su2(two_j, int(1))).unwrap();
            assert_eq!(f, builtin("su2").unwrap().f);
        }
    }
}
