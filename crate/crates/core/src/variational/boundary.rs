//! Boundary BFV data induced by a BV model on a source with boundary.
//!
//! The boundary one-form is read off the variation (`α_∂ = −θ` restricted
//! to `∂N`, and `±θ_Γ` at the endpoints of each line), `Ω_∂ = δα_∂`, and
//! the boundary action is found by solving `ι_{Q_∂}Ω_∂ = δS_∂` over a
//! finite ansatz, modulo exact terms on the surface.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::grassmann::{Gen, GradedPoly, Monomial, Role};
use crate::matrix::solve_rational;
use crate::scalar::{int, rat, Rational};
use crate::{Error, Result};

use super::hamiltonian::{hamiltonian_vf, Images};
use super::ibp::normal_form;
use super::models::BVModel;
use super::{half, scale_all, Calculus, D, IOTA};

pub const SURFACE: &str = "∂N";
const MAX_ANSATZ_DEGREE: u32 = 3;

/// Point contribution `sign · term` at one endpoint of a Wilson line.
#[derive(Clone, Debug)]
pub struct PointTerm {
    pub point: String,
    pub sign: i32,
    /// 1-based index of the Wilson line.
    pub orbit: usize,
    pub term: GradedPoly,
}

#[derive(Clone, Debug)]
pub struct BoundaryAction {
    pub surface: Option<GradedPoly>,
    pub points: Vec<PointTerm>,
    pub ghost: i32,
}

#[derive(Clone, Debug)]
pub struct BoundaryCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct BoundaryReport {
    pub calc: Calculus,
    pub alpha: BTreeMap<String, GradedPoly>,
    pub omega: BTreeMap<String, GradedPoly>,
    pub action: BoundaryAction,
    /// Transcription of the closed-form boundary action for comparison.
    pub reference: BoundaryAction,
    /// Closed-form `Ω_∂` per stratum for comparison.
    pub reference_omega: BTreeMap<String, GradedPoly>,
    /// `Q_∂ S_∂` per stratum, surface part in normal form.
    pub master: BTreeMap<String, GradedPoly>,
    /// 1D only: `Q_∂ S_∂` at each point as a multiple of `(T0, T0)`, and their sum.
    pub point_sum: Option<(Vec<(String, Rational)>, Rational)>,
    pub checks: Vec<BoundaryCheck>,
}

impl BoundaryReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn fmt(&self, p: &GradedPoly) -> String {
        self.calc.fmt(p)
    }
}

struct Endpoint {
    label: String,
    /// `+1` at the start `z_k`, `−1` at the end `z'_k`.
    sign: i32,
    line: usize,
}

/// Derives the boundary BFV structure and action.
pub fn boundary_bfv(model: &BVModel) -> Result<BoundaryReport> {
    if !model.has_boundary {
        return Err(Error::Precondition(format!("{} has a closed source", model.name)));
    }
    let hv = hamiltonian_vf(model)?;
    let mut calc = hv.calc.clone();
    let bulk = model.bulk.clone();
    let three_d = model.source_dim == 3;
    let bulk_gens: Vec<Gen> = model.fields.iter().flat_map(|f| f.all_gens()).collect();

    if three_d {
        calc.add_stratum(SURFACE, 2);
        calc.restrict_gens(&bulk_gens, SURFACE, &bulk)?;
    }
    let mut endpoints = Vec::new();
    for (k, w) in model.wilson.iter().enumerate() {
        let (z, zp) = w.endpoints.clone().expect("open lines carry endpoints");
        for (label, sign) in [(z, 1), (zp, -1)] {
            calc.add_stratum(&label, 0);
            let mut gens: Vec<Gen> = bulk_gens.clone();
            gens.extend(w.h.iter().chain(&w.eta).chain(&w.xi).chain(&w.deta).chain(&w.gplus).chain(&w.vgplus));
            calc.restrict_gens(&gens, &label, &bulk)?;
            endpoints.push(Endpoint { label, sign, line: k });
        }
    }

    // boundary one-form and two-form
    let mut alpha: BTreeMap<String, GradedPoly> = BTreeMap::new();
    if three_d {
        alpha.insert(SURFACE.into(), -&calc.restrict(&hv.variations[&bulk].theta, SURFACE));
    }
    for e in &endpoints {
        let curve = &model.wilson[e.line].curve;
        let th = calc.restrict(&hv.variations[curve].theta, &e.label);
        alpha.insert(e.label.clone(), th.scale(&int(e.sign as i64)));
    }
    let omega: BTreeMap<String, GradedPoly> = alpha.iter().map(|(x, a)| (x.clone(), calc.delta(a))).collect();

    // Q and ι_Q restricted to the boundary; currents along Γ_k cross ∂N at
    // the endpoints with the outward orientation (−1 at z_k, +1 at z'_k)
    let mut q = Images::default();
    let mut iota = Images::default();
    let copies: Vec<(Gen, Gen, String)> = calc
        .alpha
        .gens()
        .filter(|(_, i)| i.role != Role::Auxiliary && (i.stratum == SURFACE || endpoints.iter().any(|e| e.label == i.stratum)))
        .map(|(g, i)| (g, calc.root(g), i.stratum.clone()))
        .collect();
    for (c, r, x) in copies {
        let (src, dst) = if calc.alpha.info(c).delta == 1 { (&hv.iota, &mut iota) } else { (&hv.q, &mut q) };
        if let Some(u) = src.local.get(&r) {
            let ru = calc.restrict(u, &x);
            if !ru.is_zero() {
                dst.local.insert(c, ru);
            }
        }
        if x != SURFACE {
            continue;
        }
        for (curve, cur) in src.currents.get(&r).into_iter().flatten() {
            for e in endpoints.iter().filter(|e| model.wilson[e.line].curve == *curve) {
                let o = -e.sign as i64;
                let at = calc.restrict(cur, &e.label).scale(&int(o));
                if !at.is_zero() {
                    dst.currents.entry(c).or_default().push((e.label.clone(), at));
                }
            }
        }
    }

    // R = ι_{Q_∂}Ω_∂ per stratum
    let mut rhs: BTreeMap<String, GradedPoly> = BTreeMap::new();
    for om in omega.values() {
        for (y, p) in iota.apply(&calc, om, IOTA) {
            let e = rhs.entry(y).or_default();
            *e = &*e + &p;
        }
    }

    let mut checks = Vec::new();
    let mut action = BoundaryAction { surface: None, points: Vec::new(), ghost: 1 };
    let mut solved: BTreeMap<String, GradedPoly> = BTreeMap::new();
    let strata: Vec<String> = omega.keys().cloned().collect();
    for x in &strata {
        let r = rhs.get(x).cloned().unwrap_or_default();
        let s = solve_action(&calc, model.z2, x, &r);
        let ok = s.is_some();
        let s = s.unwrap_or_default();
        let resid = reduce_on(&calc, x, &(&calc.delta(&s) - &r));
        checks.push(BoundaryCheck {
            name: format!("hamiltonian[{x}]"),
            ok: ok && resid.is_zero(),
            detail: format!("δS_∂ − ι_QΩ_∂ = {}", calc.fmt(&resid)),
        });
        solved.insert(x.clone(), s);
    }
    if three_d {
        action.surface = Some(solved[SURFACE].clone());
    }
    for e in &endpoints {
        let term = solved[&e.label].scale(&int(e.sign as i64));
        action.points.push(PointTerm { point: e.label.clone(), sign: e.sign, orbit: e.line + 1, term });
    }
    let ghost_ok = solved.values().all(|s| {
        s.terms().all(|(m, _)| {
            let g = calc.ghost(m);
            if model.z2 {
                g.rem_euclid(2) == 1
            } else {
                g == 1
            }
        })
    });
    checks.push(BoundaryCheck { name: "ghost".into(), ok: ghost_ok, detail: "boundary action has ghost number 1".into() });
    let omega_ghost = omega.values().all(|o| o.terms().all(|(m, _)| model.z2 || calc.ghost(m) == 0));
    checks.push(BoundaryCheck { name: "omega-ghost".into(), ok: omega_ghost, detail: "Ω_∂ has ghost number 0".into() });

    let reference = reference_action(&calc, model, &endpoints);
    checks.extend(compare(&calc, &action, &reference));
    let reference_omega = reference_omega(&calc, model, &endpoints);
    for (x, w) in &reference_omega {
        let diff = &omega[x] - w;
        checks.push(BoundaryCheck {
            name: format!("reference-omega[{x}]"),
            ok: diff.is_zero(),
            detail: format!("derived − reference = {}", calc.fmt(&diff)),
        });
    }

    // master equation on the boundary
    let mut master: BTreeMap<String, GradedPoly> = BTreeMap::new();
    for s in solved.values() {
        for (y, p) in q.apply(&calc, s, D) {
            let e = master.entry(y).or_default();
            *e = &*e + &p;
        }
    }
    for (y, p) in master.iter_mut() {
        *p = reduce_on(&calc, y, p);
    }
    let mut point_sum = None;
    if !three_d {
        let mut per = Vec::new();
        let mut total = Rational::zero();
        let mut shape_ok = true;
        for e in &endpoints {
            let w = &model.wilson[e.line];
            let p = master.get(&e.label).cloned().unwrap_or_default();
            let h: Vec<GradedPoly> = w.h.iter().map(|g| GradedPoly::gen(calc.copy(*g, &e.label).expect("H at endpoint"))).collect();
            let hh = calc.pair(&h, &h);
            match p.multiple_of(&hh) {
                Some(c) => {
                    let v = &c * w.orbit.norm_sqr();
                    total += &v;
                    per.push((e.label.clone(), c));
                }
                None => shape_ok = false,
            }
        }
        checks.push(BoundaryCheck {
            name: "master-point-sum".into(),
            ok: shape_ok && total.is_zero(),
            detail: format!("Σ_points Q_∂S_∂ = {total} after (H,H) = (T0,T0)"),
        });
        point_sum = Some((per, total));
    }
    Ok(BoundaryReport { calc, alpha, omega, action, reference, reference_omega, master, point_sum, checks })
}

fn reduce_on(calc: &Calculus, x: &str, p: &GradedPoly) -> GradedPoly {
    if calc.dim(x) == 0 {
        p.clone()
    } else {
        normal_form(calc, p)
    }
}

/// `p = c · q` for a rational `c`.
/// Monomials of form degree `dim(x)`, ghost 1 (odd in ℤ₂ mode), degree at
/// most three and at most linear in the orbit variables.
fn ansatz(calc: &Calculus, z2: bool, x: &str) -> Vec<Monomial> {
    let gens: Vec<Gen> =
        calc.alpha.gens().filter(|(_, i)| i.stratum == x && i.delta == 0 && i.role != Role::Auxiliary).map(|(g, _)| g).collect();
    let dim = calc.dim(x) as i32;
    let mut out = Vec::new();
    let mut word = Vec::new();
    enumerate(&gens, 0, &mut word, &mut out);
    out.retain(|m: &Monomial| {
        let g = calc.ghost(m);
        let orbit_deg: u32 = m.factors().iter().filter(|(h, _)| calc.alpha.name(calc.root(*h)).starts_with('H')).map(|(_, e)| *e).sum();
        calc.form_degree(m) == dim && (if z2 { g.rem_euclid(2) == 1 } else { g == 1 }) && orbit_deg <= 1
    });
    out
}

fn enumerate(gens: &[Gen], from: usize, word: &mut Vec<Gen>, out: &mut Vec<Monomial>) {
    if let Some((_, m)) = Monomial::from_word(word) {
        if !word.is_empty() {
            out.push(m);
        }
    }
    if word.len() as u32 == MAX_ANSATZ_DEGREE {
        return;
    }
    for i in from..gens.len() {
        let g = gens[i];
        if g.grade().is_nilpotent() && word.last() == Some(&g) {
            continue;
        }
        word.push(g);
        enumerate(gens, i, word, out);
        word.pop();
    }
}

/// Solves `δS ≡ r` over the ansatz on stratum `x`.
fn solve_action(calc: &Calculus, z2: bool, x: &str, r: &GradedPoly) -> Option<GradedPoly> {
    let basis = ansatz(calc, z2, x);
    let cols: Vec<GradedPoly> =
        basis.iter().map(|m| reduce_on(calc, x, &calc.delta(&GradedPoly::term(m.clone(), Rational::one())))).collect();
    let target = reduce_on(calc, x, r);
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    let mut row_of = |m: &Monomial, rows: &mut Vec<BTreeMap<usize, Rational>>, b: &mut Vec<Rational>| -> usize {
        *index.entry(m.clone()).or_insert_with(|| {
            rows.push(BTreeMap::new());
            b.push(Rational::zero());
            rows.len() - 1
        })
    };
    for (j, col) in cols.iter().enumerate() {
        for (m, c) in col.terms() {
            let i = row_of(m, &mut rows, &mut b);
            rows[i].insert(j, c.clone());
        }
    }
    for (m, c) in target.terms() {
        let i = row_of(m, &mut rows, &mut b);
        b[i] = c.clone();
    }
    let sol = solve_rational(&rows, &b, basis.len())?;
    let mut s = GradedPoly::zero();
    for (m, c) in basis.into_iter().zip(sol) {
        if !c.is_zero() {
            s.add_term(m, c);
        }
    }
    Some(reduce_on(calc, x, &s))
}

/// Closed-form boundary actions as stated for the two models: on `∂N`,
/// `−(dA + ½[A,A], γ) − (A⁺, ½[γ,γ])` with `∓(H, γ)` at `z_k`, `z'_k`; in
/// 1D, `±(−⅙(ψ,[ψ,ψ]) + (H,ψ))` at `z`, `z'`.
fn reference_action(calc: &Calculus, model: &BVModel, endpoints: &[Endpoint]) -> BoundaryAction {
    let on = |name: &str, x: &str| -> Vec<GradedPoly> {
        let f = model.field(name).expect("field");
        f.comps.iter().map(|c| calc.copy(c.x, x).map(GradedPoly::gen).unwrap_or_default()).collect()
    };
    let mut out = BoundaryAction { surface: None, points: Vec::new(), ghost: 1 };
    let ghost_name = if model.source_dim == 3 { "γ" } else { "ψ" };
    if model.source_dim == 3 {
        let (a, g, ap) = (on("A", SURFACE), on("γ", SURFACE), on("A⁺", SURFACE));
        let da: Vec<GradedPoly> = model
            .field("A")
            .unwrap()
            .comps
            .iter()
            .map(|c| calc.copy(c.dx.unwrap(), SURFACE).map(GradedPoly::gen).unwrap_or_default())
            .collect();
        let aa = scale_all(&calc.bracket(&a, &a), &half());
        let gg = scale_all(&calc.bracket(&g, &g), &half());
        let curv: Vec<GradedPoly> = da.iter().zip(&aa).map(|(x, y)| x + y).collect();
        let s = -&(&calc.pair(&curv, &g) + &calc.pair(&ap, &gg));
        out.surface = Some(normal_form(calc, &s));
    }
    for e in endpoints {
        let w = &model.wilson[e.line];
        let g = on(ghost_name, &e.label);
        let h: Vec<GradedPoly> = w.h.iter().map(|x| calc.copy(*x, &e.label).map(GradedPoly::gen).unwrap_or_default()).collect();
        let hg = calc.pair(&h, &g);
        let term = if model.source_dim == 3 {
            -&hg
        } else {
            let gg = calc.bracket(&g, &g);
            &calc.pair(&g, &gg).scale(&rat(-1, 6)) + &hg
        };
        out.points.push(PointTerm { point: e.label.clone(), sign: e.sign, orbit: e.line + 1, term });
    }
    out
}

/// Closed-form boundary two-forms: `½(δA,δA) + (δγ,δA⁺)` on `∂N`, and at
/// each endpoint `±` the lifted Kirillov form `(H, ½[η,η])`, plus
/// `½(δψ,δψ)` in 1D.
fn reference_omega(calc: &Calculus, model: &BVModel, endpoints: &[Endpoint]) -> BTreeMap<String, GradedPoly> {
    let var = |name: &str, x: &str| -> Vec<GradedPoly> {
        let f = model.field(name).expect("field");
        f.comps.iter().map(|c| calc.copy(c.vx, x).map(GradedPoly::gen).unwrap_or_default()).collect()
    };
    let mut out = BTreeMap::new();
    if model.source_dim == 3 {
        let (va, vg, vap) = (var("A", SURFACE), var("γ", SURFACE), var("A⁺", SURFACE));
        out.insert(SURFACE.to_string(), &calc.pair(&va, &va).scale(&half()) + &calc.pair(&vg, &vap));
    }
    for e in endpoints {
        let w = &model.wilson[e.line];
        let at = |gs: &[Gen]| -> Vec<GradedPoly> {
            gs.iter().map(|x| calc.copy(*x, &e.label).map(GradedPoly::gen).unwrap_or_default()).collect()
        };
        let (h, eta) = (at(&w.h), at(&w.eta));
        let mut om = calc.pair(&h, &scale_all(&calc.bracket(&eta, &eta), &half()));
        if model.source_dim == 1 {
            let vp = var("ψ", &e.label);
            om = &om + &calc.pair(&vp, &vp).scale(&half());
        }
        out.insert(e.label.clone(), om.scale(&int(e.sign as i64)));
    }
    out
}

fn compare(calc: &Calculus, got: &BoundaryAction, want: &BoundaryAction) -> Vec<BoundaryCheck> {
    let mut out = Vec::new();
    if let (Some(g), Some(w)) = (&got.surface, &want.surface) {
        let diff = normal_form(calc, &(g - w));
        out.push(BoundaryCheck {
            name: "reference-surface".into(),
            ok: diff.is_zero(),
            detail: format!("derived − reference = {}", calc.fmt(&diff)),
        });
    }
    for (g, w) in got.points.iter().zip(&want.points) {
        let diff = &g.term - &w.term;
        out.push(BoundaryCheck {
            name: format!("reference-point[{}]", g.point),
            ok: diff.is_zero() && g.sign == w.sign,
            detail: format!("derived − reference = {}", calc.fmt(&diff)),
        });
    }
    let signs_ok = got.points.chunks(2).all(|p| p.len() == 2 && p[0].sign == -p[1].sign);
    out.push(BoundaryCheck { name: "point-pairs".into(), ok: signs_ok, detail: "two endpoints per line with opposite signs".into() });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin;
    use crate::variational::{add_all, attach_wilson, build_cs1, build_cs3, OrbitSpec};

    fn on(r: &BoundaryReport, gs: &[Gen], x: &str) -> Vec<GradedPoly> {
        gs.iter().map(|g| GradedPoly::gen(r.calc.copy(*g, x).unwrap())).collect()
    }

    fn check(r: &BoundaryReport, name: &str) -> bool {
        r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}")).ok
    }

    #[test]
    fn closed_source_is_rejected() {
        let m = build_cs3(&builtin("su2").unwrap()).unwrap();
        assert!(matches!(boundary_bfv(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn interval_with_wilson_line() {
        let l = builtin("su2").unwrap();
        let orbit = OrbitSpec::new(&l, vec![int(0), int(0), int(1)], "j").unwrap();
        let m = attach_wilson(&build_cs1(&l).unwrap().with_boundary().unwrap(), &orbit, "Γ").unwrap();
        let r = boundary_bfv(&m).unwrap();
        for c in ["hamiltonian[z1]", "hamiltonian[z'1]", "ghost", "point-pairs", "master-point-sum"] {
            assert!(check(&r, c), "{c}");
        }
        let psi: Vec<Gen> = m.field("ψ").unwrap().comps.iter().map(|c| c.x).collect();
        let w = &m.wilson[0];
        for (p, s) in r.action.points.iter().zip([1, -1]) {
            assert_eq!(p.sign, s);
            let (x, h) = (on(&r, &psi, &p.point), on(&r, &w.h, &p.point));
            let cubic = r.calc.pair(&x, &r.calc.bracket(&x, &x)).scale(&rat(-1, 6));
            let want = &cubic - &r.calc.pair(&h, &x);
            assert_eq!(p.term.clone(), want, "{}", r.fmt(&p.term));
            assert_eq!(r.master[&p.point], r.calc.pair(&h, &h).scale(&int(-s as i64)));
        }
        let (per, total) = r.point_sum.clone().unwrap();
        assert_eq!(per.len(), 2);
        assert!(total.is_zero());
    }

    #[test]
    fn abelian_interval_has_no_cubic_term() {
        let l = builtin("abelian(2)").unwrap();
        let orbit = OrbitSpec::new(&l, vec![int(1), int(2)], "q").unwrap();
        let m = attach_wilson(&build_cs1(&l).unwrap().with_boundary().unwrap(), &orbit, "Γ").unwrap();
        let r = boundary_bfv(&m).unwrap();
        let psi: Vec<Gen> = m.field("ψ").unwrap().comps.iter().map(|c| c.x).collect();
        for p in &r.action.points {
            let want = -&r.calc.pair(&on(&r, &m.wilson[0].h, &p.point), &on(&r, &psi, &p.point));
            assert_eq!(p.term.clone(), want);
        }
    }

    #[test]
    fn three_dimensional_boundary_with_two_lines() {
        let l = builtin("su2").unwrap();
        let orbit = OrbitSpec::new(&l, vec![int(0), int(0), int(1)], "j").unwrap();
        let m = build_cs3(&l).unwrap().with_boundary().unwrap();
        let m = attach_wilson(&attach_wilson(&m, &orbit, "Γ1").unwrap(), &orbit, "Γ2").unwrap();
        let r = boundary_bfv(&m).unwrap();
        for c in r.checks.iter().filter(|c| c.name.starts_with("hamiltonian")) {
            assert!(c.ok, "{} {}", c.name, c.detail);
        }
        assert!(check(&r, "ghost") && check(&r, "omega-ghost") && check(&r, "point-pairs"));
        let gens = |n: &str| -> Vec<Gen> { m.field(n).unwrap().comps.iter().map(|c| c.x).collect() };
        let (a, g, ap) = (on(&r, &gens("A"), SURFACE), on(&r, &gens("γ"), SURFACE), on(&r, &gens("A⁺"), SURFACE));
        let da: Vec<GradedPoly> =
            m.field("A").unwrap().comps.iter().map(|c| GradedPoly::gen(r.calc.copy(c.dx.unwrap(), SURFACE).unwrap())).collect();
        let curv = add_all(&da, &scale_all(&r.calc.bracket(&a, &a), &half()));
        let want = &r.calc.pair(&curv, &g) - &r.calc.pair(&ap, &scale_all(&r.calc.bracket(&g, &g), &half()));
        assert_eq!(r.action.surface.clone().unwrap(), normal_form(&r.calc, &want));
        assert_eq!(r.action.points.len(), 4);
        for p in &r.action.points {
            let w = &m.wilson[p.orbit - 1];
            let want = -&r.calc.pair(&on(&r, &w.h, &p.point), &on(&r, &gens("γ"), &p.point));
            assert_eq!(p.term.clone(), want, "{}", p.point);
        }
        assert_eq!(r.action.points.iter().map(|p| p.sign).collect::<Vec<_>>(), vec![1, -1, 1, -1]);
        assert!(check(&r, "reference-point[z1]") && check(&r, "reference-point[z'2]"));
    }
}
