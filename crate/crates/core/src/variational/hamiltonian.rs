//! Variations, Hamiltonian vector fields and the classical master equation.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::grassmann::{Gen, Grade, GradedPoly, Monomial, Role, Side};
use crate::matrix::invert_rational;
use crate::scalar::Rational;
use crate::{Error, Result};

use super::ibp::reduce;
use super::models::{BVModel, WilsonLine};
use super::{gens_poly, half, normal_form, Calculus, D, IOTA};

const MAX_ITER: usize = 64;

/// `δS = Σ v E_v + d θ` on one stratum.
#[derive(Clone, Debug)]
pub struct Variation {
    pub stratum: String,
    pub delta_s: GradedPoly,
    pub euler_lagrange: BTreeMap<Gen, GradedPoly>,
    pub theta: GradedPoly,
}

/// Images of generators under a derivation whose values may carry currents
/// supported on lower strata.
#[derive(Clone, Debug, Default)]
pub struct Images {
    pub local: BTreeMap<Gen, GradedPoly>,
    /// `g ↦ [(stratum, c)]`: contributions `c δ_stratum`.
    pub currents: BTreeMap<Gen, Vec<(String, GradedPoly)>>,
}

impl Images {
    /// Applies the derivation of grade `grade` to an integrand living on a
    /// single stratum; returns the result on every stratum it reaches.
    pub fn apply(&self, calc: &Calculus, f: &GradedPoly, grade: Grade) -> BTreeMap<String, GradedPoly> {
        let mut out: BTreeMap<String, GradedPoly> = BTreeMap::new();
        let Some(home) = f.gens().first().map(|g| calc.stratum_of(*g).to_string()) else { return out };
        let local = calc.truncate(&f.apply_derivation(grade, &|g| self.local.get(&g).cloned()));
        if !local.is_zero() {
            out.insert(home.clone(), local);
        }
        if self.currents.is_empty() {
            return out;
        }
        for (m, c) in f.terms() {
            let word = m.expanded();
            let mut prefix = Grade::EVEN;
            for k in 0..word.len() {
                if let Some(cs) = self.currents.get(&word[k]) {
                    let mut coef = c.clone();
                    if grade.odd_with(prefix) {
                        coef = -coef;
                    }
                    for (y, cur) in cs {
                        let pre = calc.restrict(&GradedPoly::word(&word[..k], coef.clone()), y);
                        let post = calc.restrict(&GradedPoly::word(&word[k + 1..], Rational::one()), y);
                        let t = calc.mul(&calc.mul(&pre, cur), &post);
                        let e = out.entry(y.clone()).or_default();
                        *e = &*e + &t;
                    }
                }
                prefix = prefix.plus(word[k].grade());
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

#[derive(Clone, Debug)]
pub struct HamiltonianVF {
    /// Calculus extended with the placeholders `U_v`.
    pub calc: Calculus,
    /// `v ↦ ι_Q v`.
    pub iota: Images,
    /// `x ↦ Q x` on function generators.
    pub q: Images,
    pub grade: Grade,
    pub variations: BTreeMap<String, Variation>,
    /// `ι_QΩ = δS − dθ` on each stratum, checked by substitution.
    pub consistent: BTreeMap<String, bool>,
}

impl HamiltonianVF {
    pub fn apply(&self, f: &GradedPoly) -> BTreeMap<String, GradedPoly> {
        self.q.apply(&self.calc, f, self.grade)
    }

    pub fn image(&self, x: Gen) -> GradedPoly {
        self.q.local.get(&x).cloned().unwrap_or_default()
    }
}

fn is_delta_gen(calc: &Calculus, g: Gen) -> bool {
    calc.alpha.info(g).delta == 1
}

/// Splits `δF` into Euler-Lagrange and boundary parts.
pub fn vary(calc: &Calculus, stratum: &str, f: &GradedPoly) -> Result<Variation> {
    let ds = calc.delta(f);
    let mut c_part: BTreeMap<Gen, GradedPoly> = BTreeMap::new();
    let mut d_part: BTreeMap<Gen, GradedPoly> = BTreeMap::new();
    for (m, _) in ds.terms() {
        if calc.delta_degree(m) != 1 {
            return Err(Error::Precondition("variation of a non-homogeneous integrand".into()));
        }
    }
    for g in ds.gens() {
        if !is_delta_gen(calc, g) {
            continue;
        }
        let coef = ds.derive(g, Side::Left);
        match calc.d_source(g) {
            Some((v, eps)) => {
                // dv = ε d v
                d_part.insert(v, coef.scale(&eps));
            }
            None => {
                c_part.insert(g, coef);
            }
        }
    }
    let mut el: BTreeMap<Gen, GradedPoly> = BTreeMap::new();
    let mut theta = GradedPoly::zero();
    let keys: BTreeSet<Gen> = c_part.keys().chain(d_part.keys()).copied().collect();
    for v in keys {
        let mut e = c_part.get(&v).cloned().unwrap_or_default();
        if let Some(dv) = d_part.get(&v) {
            // (d v) D = d(v D) − (−1)^{|v|} v dD
            let ddv = calc.d(dv);
            if D.odd_with(v.grade()) {
                e = &e + &ddv;
            } else {
                e = &e - &ddv;
            }
            theta = &theta + &calc.mul(&GradedPoly::gen(v), dv);
        }
        if !e.is_zero() {
            el.insert(v, e);
        }
    }
    let mut re = calc.d(&theta);
    for (v, e) in &el {
        re = &re + &calc.mul(&GradedPoly::gen(*v), e);
    }
    if re != ds {
        return Err(Error::NoConvergence(format!("variation on {stratum} does not re-expand")));
    }
    Ok(Variation { stratum: stratum.to_string(), delta_s: ds, euler_lagrange: el, theta })
}

pub fn variation(model: &BVModel) -> Result<BTreeMap<String, Variation>> {
    model.action.iter().map(|(x, s)| Ok((x.clone(), vary(&model.calc, x, s)?))).collect()
}

/// `ι_QΩ = Σ_{v,w} v M_vw U_w` split into a constant part and the rest.
struct PairingMatrix {
    rows: Vec<Gen>,
    m0_inv: Vec<Vec<Rational>>,
    /// Non-constant entries `(row, col, N_vw)`.
    n: Vec<(usize, usize, GradedPoly)>,
}

fn pairing_matrix(calc: &mut Calculus, omega: &GradedPoly, stratum: &str) -> Result<PairingMatrix> {
    let rows: Vec<Gen> = omega.gens().into_iter().filter(|g| is_delta_gen(calc, *g)).collect();
    let mut cols = Vec::with_capacity(rows.len());
    for v in &rows {
        cols.push(calc.placeholder(*v)?);
    }
    let iq = contract(calc, omega);
    let mut m0 = vec![vec![Rational::zero(); rows.len()]; rows.len()];
    let mut n = Vec::new();
    for (i, v) in rows.iter().enumerate() {
        let dv = iq.derive(*v, Side::Left);
        for (j, u) in cols.iter().enumerate() {
            let e = dv.derive(*u, Side::Right);
            let c0 = e.coeff(&Monomial::one());
            let rest = e.filter(|m| !m.is_one());
            m0[i][j] = c0;
            if !rest.is_zero() {
                n.push((i, j, rest));
            }
        }
    }
    let m0_inv = invert_rational(&m0).ok_or_else(|| Error::Pairing(format!("two-form on {stratum} is degenerate")))?;
    Ok(PairingMatrix { rows, m0_inv, n })
}

/// `ι_QΩ` with `ι_Q v = U_v`.
fn contract(calc: &Calculus, omega: &GradedPoly) -> GradedPoly {
    omega.apply_derivation(IOTA, &|g| calc.placeholder_of(g).map(GradedPoly::gen))
}

/// Solves `Σ_w M_vw u_w = E_v` by `u = M0⁻¹(E − N u)`; the iteration stops
/// because every non-constant entry raises the form degree.
fn solve_rows(calc: &Calculus, pm: &PairingMatrix, rhs: &[GradedPoly]) -> Result<Vec<GradedPoly>> {
    let k = pm.rows.len();
    let mut u = vec![GradedPoly::zero(); k];
    for _ in 0..MAX_ITER {
        let mut r: Vec<GradedPoly> = rhs.to_vec();
        for (i, j, nij) in &pm.n {
            r[*i] = &r[*i] - &calc.mul(nij, &u[*j]);
        }
        let mut next = vec![GradedPoly::zero(); k];
        for (w, row) in pm.m0_inv.iter().enumerate() {
            for (v, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    next[w].add_scaled(&r[v], c);
                }
            }
        }
        if next == u {
            return Ok(u);
        }
        u = next;
    }
    Err(Error::NoConvergence("Hamiltonian vector field iteration did not stabilise".into()))
}

fn pairing_error(calc: &Calculus, v: Gen) -> Error {
    Error::Pairing(format!("generator without pairing partner encountered: {}", calc.alpha.name(v)))
}

/// Solves `ι_QΩ = δF − dθ` for the given variations.
fn solve_iota(calc: &mut Calculus, model: &BVModel, vars: &BTreeMap<String, Variation>) -> Result<Images> {
    let mut mats: BTreeMap<String, PairingMatrix> = BTreeMap::new();
    for (x, om) in &model.omega {
        mats.insert(x.clone(), pairing_matrix(calc, om, x)?);
    }
    let mut iota = Images::default();
    for (x, var) in vars {
        let mut own: BTreeMap<Gen, GradedPoly> = BTreeMap::new();
        let mut foreign: BTreeMap<String, BTreeMap<Gen, GradedPoly>> = BTreeMap::new();
        for (v, e) in &var.euler_lagrange {
            let r = calc.root(*v);
            if r == *v {
                own.insert(*v, e.clone());
            } else {
                foreign.entry(calc.stratum_of(r).to_string()).or_default().insert(r, e.clone());
            }
        }
        if !own.is_empty() {
            let pm = mats.get(x).ok_or_else(|| pairing_error(calc, *own.keys().next().unwrap()))?;
            if let Some(v) = own.keys().find(|v| !pm.rows.contains(v)) {
                return Err(pairing_error(calc, *v));
            }
            let rhs: Vec<GradedPoly> = pm.rows.iter().map(|v| own.get(v).cloned().unwrap_or_default()).collect();
            let u = solve_rows(calc, pm, &rhs)?;
            for (v, uv) in pm.rows.iter().zip(u) {
                let e = iota.local.entry(*v).or_default();
                *e = &*e + &uv;
            }
        }
        for (b, es) in foreign {
            let pm = mats.get(&b).ok_or_else(|| pairing_error(calc, *es.keys().next().unwrap()))?;
            if let Some(v) = es.keys().find(|v| !pm.rows.contains(v)) {
                return Err(pairing_error(calc, *v));
            }
            if !pm.n.is_empty() {
                return Err(Error::Precondition(format!("currents into a non-constant two-form on {b}")));
            }
            let rhs: Vec<GradedPoly> = pm.rows.iter().map(|v| es.get(v).cloned().unwrap_or_default()).collect();
            let c = solve_rows(calc, pm, &rhs)?;
            for (v, cv) in pm.rows.iter().zip(c) {
                if !cv.is_zero() {
                    iota.currents.entry(*v).or_default().push((x.clone(), cv));
                }
            }
        }
    }
    // restricted δ-generators contract like their roots
    let copies: Vec<Gen> = calc.alpha.gens().map(|(g, _)| g).filter(|g| calc.root(*g) != *g).collect();
    for c in copies {
        if let Some(u) = iota.local.get(&calc.root(c)).cloned() {
            let r = calc.restrict(&u, calc.stratum_of(c));
            if !r.is_zero() {
                iota.local.insert(c, r);
            }
        }
    }
    Ok(iota)
}

/// `Q x = ι_Q δx` on function generators. `ι_Q` graded-commutes with `d`
/// (`Q d = −d Q`), which fixes it on d-images of δ-generators.
fn q_images(calc: &Calculus, iota: &Images) -> Images {
    let sign = if IOTA.odd_with(D) { Rational::from_integer((-1).into()) } else { Rational::one() };
    let mut ext = iota.clone();
    for (g, info) in calc.alpha.gens() {
        if info.delta != 1 {
            continue;
        }
        let Some((v, eps)) = calc.d_source(g) else { continue };
        let eps = &eps * &sign;
        if let Some(u) = iota.local.get(&v) {
            ext.local.insert(g, calc.d(u).scale(&eps));
        }
        // δ_Γ is closed away from the boundary
        if let Some(cs) = iota.currents.get(&v) {
            ext.currents.insert(g, cs.iter().map(|(y, c)| (y.clone(), calc.d(c).scale(&eps))).collect());
        }
    }
    let mut q = Images::default();
    for (x, info) in calc.alpha.gens() {
        if info.delta != 0 || info.role == Role::Auxiliary {
            continue;
        }
        let Some(dx) = calc.delta_image(x) else { continue };
        for (y, p) in ext.apply(calc, dx, IOTA) {
            if y == info.stratum {
                q.local.insert(x, p);
            } else {
                q.currents.entry(x).or_default().push((y, p));
            }
        }
    }
    q
}

fn integrand_grade(calc: &Calculus, stratum: &str, f: &GradedPoly) -> Result<Grade> {
    let g = f.grade().ok_or_else(|| Error::Precondition("integrand is not homogeneous".into()))?;
    let dim = calc.dim(stratum) as i64;
    Ok(Grade::new(g.p as i64 + dim + 1, 0))
}

/// Solves for the Hamiltonian vector field of the action.
pub fn hamiltonian_vf(model: &BVModel) -> Result<HamiltonianVF> {
    let vars = variation(model)?;
    let mut calc = model.calc.clone();
    let iota = solve_iota(&mut calc, model, &vars)?;
    let q = q_images(&calc, &iota);
    let grade = D;
    // ι_QΩ = δS − dθ, per stratum, including currents from other strata
    let mut lhs: BTreeMap<String, GradedPoly> = BTreeMap::new();
    for om in model.omega.values() {
        let c = contract(&calc, om);
        let local = calc.truncate(&c.substitute(&|g| calc.placeholder_source(g).map(|v| iota.local.get(&v).cloned().unwrap_or_default())));
        if let Some(g0) = local.gens().first() {
            let e = lhs.entry(calc.stratum_of(*g0).to_string()).or_default();
            *e = &*e + &local;
        }
        let cur = Images { local: BTreeMap::new(), currents: iota.currents.clone() };
        for (y, p) in cur.apply(&calc, om, IOTA) {
            let e = lhs.entry(y).or_default();
            *e = &*e + &p;
        }
    }
    let mut consistent = BTreeMap::new();
    for (x, var) in &vars {
        let rhs = &var.delta_s - &calc.d(&var.theta);
        consistent.insert(x.clone(), lhs.get(x).cloned().unwrap_or_default() == rhs);
    }
    Ok(HamiltonianVF { calc, iota, q, grade, variations: vars, consistent })
}

/// `{∫F, G}` computed as `Q_F(G)`, where `F` is a top-degree integrand on
/// one stratum and `G` any local expression.
pub fn bv_bracket(model: &BVModel, f: &GradedPoly, g: &GradedPoly) -> Result<BTreeMap<String, GradedPoly>> {
    let Some(g0) = f.gens().first().copied() else { return Ok(BTreeMap::new()) };
    let stratum = model.calc.stratum_of(g0).to_string();
    let dim = model.calc.dim(&stratum) as i32;
    if f.terms().any(|(m, _)| model.calc.form_degree(m) != dim) {
        return Err(Error::Precondition(format!("bracket argument is not a top-degree integrand on {stratum}")));
    }
    let var = vary(&model.calc, &stratum, f)?;
    let mut calc = model.calc.clone();
    let vars: BTreeMap<String, Variation> = [(stratum.clone(), var)].into_iter().collect();
    let iota = solve_iota(&mut calc, model, &vars)?;
    let q = q_images(&calc, &iota);
    let grade = integrand_grade(&calc, &stratum, f)?;
    Ok(q.apply(&calc, g, grade))
}

#[derive(Clone, Debug)]
pub struct StratumResidue {
    pub raw: GradedPoly,
    /// Normal form of `½ Q S` modulo exact integrands.
    pub before_rewrite: GradedPoly,
    /// After the orthogonality relation `(H, g⁺) = 0`.
    pub residue: GradedPoly,
    /// `ρ` with `raw = before_rewrite + dρ`.
    pub flux: GradedPoly,
}

#[derive(Clone, Debug)]
pub struct CmeReport {
    pub strata: BTreeMap<String, StratumResidue>,
    pub consistent: BTreeMap<String, bool>,
    pub ok: bool,
}

/// Evaluates `½{S,S}` stratum by stratum modulo exact terms.
pub fn check_cme(model: &BVModel) -> Result<CmeReport> {
    let hv = hamiltonian_vf(model)?;
    let mut raw: BTreeMap<String, GradedPoly> = BTreeMap::new();
    for s in model.action.values() {
        for (y, p) in hv.apply(s) {
            let e = raw.entry(y).or_default();
            *e = &*e + &p.scale(&half());
        }
    }
    let mut strata = BTreeMap::new();
    let mut ok = hv.consistent.values().all(|b| *b);
    for (y, r) in raw {
        let (nf, flux) = reduce(&hv.calc, &r);
        let mut residue = nf.clone();
        for w in model.wilson.iter().filter(|w| w.curve == y) {
            residue = orthogonality_reduce(&hv.calc, w, &residue);
        }
        ok &= residue.is_zero();
        strata.insert(y, StratumResidue { raw: r, before_rewrite: nf, residue, flux });
    }
    Ok(CmeReport { strata, consistent: hv.consistent, ok })
}

/// `(H, g⁺)` on the line.
pub fn orthogonality_term(calc: &Calculus, line: &WilsonLine) -> GradedPoly {
    calc.pair(&gens_poly(&line.h), &gens_poly(&line.gplus))
}

/// Reduces modulo the ideal generated by `(H, g⁺)` and then modulo exact
/// terms.
pub fn orthogonality_reduce(calc: &Calculus, line: &WilsonLine, p: &GradedPoly) -> GradedPoly {
    let rel = orthogonality_term(calc, line);
    let Some(lead) = rel.leading().map(|(m, _)| m.clone()) else { return p.clone() };
    let mut cur = p.clone();
    loop {
        let hit = cur.terms().find_map(|(m, c)| quotient(m, &lead).map(|q| (m.clone(), c.clone(), q)));
        let Some((m, c, q)) = hit else { break };
        let qr = calc.mul(&GradedPoly::term(q, Rational::one()), &rel);
        let k = qr.coeff(&m);
        debug_assert!(!k.is_zero());
        cur.add_scaled(&qr, &(-(c / k)));
    }
    normal_form(calc, &cur)
}

fn quotient(m: &Monomial, d: &Monomial) -> Option<Monomial> {
    let mut out = Vec::new();
    for &(g, e) in m.factors() {
        let k = d.exponent(g);
        if k > e {
            return None;
        }
        out.extend(std::iter::repeat_n(g, (e - k) as usize));
    }
    if d.factors().iter().any(|(g, e)| m.exponent(*g) < *e) {
        return None;
    }
    Monomial::from_word(&out).map(|(_, q)| q)
}
