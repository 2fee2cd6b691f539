//! The BV models: 3D and 1D Chern-Simons theory and the auxiliary orbit
//! sector describing a Wilson line.

use std::collections::BTreeMap;

use crate::grassmann::{Bank, Gen, GenInfo, GradedPoly, Role};
use crate::lie::LieAlgebra;
use crate::scalar::{int, Rational};
use crate::{Error, Result};

use super::{d_delta_sign, gens_poly, half, scale_all, sixth, stratum_suffix, Calculus, FieldGens};

#[derive(Clone, Debug)]
pub struct FieldSpec {
    pub name: String,
    pub lie_valued: bool,
    pub form: i32,
    pub ghost: i32,
    pub stratum: String,
    pub comps: Vec<FieldGens>,
}

impl FieldSpec {
    pub fn x(&self) -> Vec<GradedPoly> {
        gens_poly(&self.comps.iter().map(|c| c.x).collect::<Vec<_>>())
    }

    pub fn dx(&self) -> Vec<GradedPoly> {
        self.comps.iter().map(|c| c.dx.map(GradedPoly::gen).unwrap_or_default()).collect()
    }

    pub fn vx(&self) -> Vec<GradedPoly> {
        gens_poly(&self.comps.iter().map(|c| c.vx).collect::<Vec<_>>())
    }

    pub fn all_gens(&self) -> Vec<Gen> {
        self.comps.iter().flat_map(|c| [Some(c.x), c.dx, Some(c.vx), c.vdx]).flatten().collect()
    }
}

/// Data of a coadjoint orbit used to couple a Wilson line.
#[derive(Clone, Debug)]
pub struct OrbitSpec {
    pub algebra: LieAlgebra,
    pub t0: Vec<Rational>,
    pub rep_label: String,
}

impl OrbitSpec {
    pub fn new(algebra: &LieAlgebra, t0: Vec<Rational>, rep_label: &str) -> Result<Self> {
        if t0.len() != algebra.dim() {
            return Err(Error::Dimension(format!("T0 has {} components, algebra has dimension {}", t0.len(), algebra.dim())));
        }
        Ok(OrbitSpec { algebra: algebra.clone(), t0, rep_label: rep_label.to_string() })
    }

    /// (T0, T0).
    pub fn norm_sqr(&self) -> Rational {
        self.t0.iter().fold(int(0), |acc, x| acc + x * x)
    }
}

/// Generators of the orbit sector on one curve. `H = Ad_g T0`, `ξ = dg g⁻¹`,
/// `η = δg g⁻¹`.
#[derive(Clone, Debug)]
pub struct WilsonLine {
    pub curve: String,
    pub orbit: OrbitSpec,
    /// Endpoint labels `(z_k, z'_k)` when the curve is an open segment.
    pub endpoints: Option<(String, String)>,
    pub h: Vec<Gen>,
    pub xi: Vec<Gen>,
    pub eta: Vec<Gen>,
    pub deta: Vec<Gen>,
    pub gplus: Vec<Gen>,
    pub vgplus: Vec<Gen>,
}

#[derive(Clone, Debug)]
pub struct BVModel {
    pub name: String,
    pub source_dim: u32,
    /// Name of the top-dimensional stratum.
    pub bulk: String,
    pub calc: Calculus,
    pub fields: Vec<FieldSpec>,
    /// Action integrand per stratum.
    pub action: BTreeMap<String, GradedPoly>,
    /// Field-space two-form integrand per stratum.
    pub omega: BTreeMap<String, GradedPoly>,
    pub wilson: Vec<WilsonLine>,
    /// Ghost number only matters modulo 2 (1D model).
    pub z2: bool,
    pub has_boundary: bool,
}

impl BVModel {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.calc.algebra
    }

    pub fn field(&self, name: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Marks the source as having a boundary. Must precede Wilson lines.
    pub fn with_boundary(mut self) -> Result<Self> {
        if !self.wilson.is_empty() {
            return Err(Error::Precondition("declare the boundary before attaching Wilson lines".into()));
        }
        self.has_boundary = true;
        self.name.push_str("+boundary");
        Ok(self)
    }

    pub fn total_action(&self) -> BTreeMap<String, GradedPoly> {
        self.action.clone()
    }

    pub fn fmt(&self, p: &GradedPoly) -> String {
        self.calc.fmt(p)
    }
}

fn add_lie_field(calc: &mut Calculus, name: &str, form: i32, ghost: i32, stratum: &str, bulk: &str) -> Result<FieldSpec> {
    let n = calc.algebra.dim();
    let mut comps = Vec::with_capacity(n);
    for a in 0..n {
        comps.push(calc.add_field(&format!("{name}_{a}"), Some(a), form, ghost, stratum, bulk)?);
    }
    Ok(FieldSpec { name: name.to_string(), lie_valued: true, form, ghost, stratum: stratum.to_string(), comps })
}

/// 3D Chern-Simons theory on a closed three-manifold `N`:
/// `S = ½(A,dA) + ⅙(A,[A,A]) − (A⁺, dγ + [A,γ]) + (γ⁺, ½[γ,γ])` and
/// `Ω = (δγ⁺,δγ) − (δA⁺,δA)`.
pub fn build_cs3(l: &LieAlgebra) -> Result<BVModel> {
    let bulk = "N";
    let mut calc = Calculus::new(l);
    calc.add_stratum(bulk, 3);
    let gamma = add_lie_field(&mut calc, "γ", 0, 1, bulk, bulk)?;
    let a = add_lie_field(&mut calc, "A", 1, 0, bulk, bulk)?;
    let ap = add_lie_field(&mut calc, "A⁺", 2, -1, bulk, bulk)?;
    let gp = add_lie_field(&mut calc, "γ⁺", 3, -2, bulk, bulk)?;

    let (ax, gx) = (a.x(), gamma.x());
    let aa = calc.bracket(&ax, &ax);
    let ag = calc.bracket(&ax, &gx);
    let gg = calc.bracket(&gx, &gx);
    let dag: Vec<GradedPoly> = gamma.dx().iter().zip(&ag).map(|(d, b)| d + b).collect();
    let mut s = calc.pair(&ax, &a.dx()).scale(&half());
    s = &s + &calc.pair(&ax, &aa).scale(&sixth());
    s = &s - &calc.pair(&ap.x(), &dag);
    s = &s + &calc.pair(&gp.x(), &scale_all(&gg, &half()));

    let omega = &calc.pair(&gp.vx(), &gamma.vx()) - &calc.pair(&ap.vx(), &a.vx());

    Ok(BVModel {
        name: format!("cs3[{}]", l.name()),
        source_dim: 3,
        bulk: bulk.into(),
        calc,
        fields: vec![gamma, a, ap, gp],
        action: [(bulk.to_string(), s)].into_iter().collect(),
        omega: [(bulk.to_string(), omega)].into_iter().collect(),
        wilson: Vec::new(),
        z2: false,
        has_boundary: false,
    })
}

/// 1D Chern-Simons theory on a curve `Γ` with an odd scalar `ψ` and a
/// connection `A`: `S = ½(ψ, dψ) + ½(ψ, [A,ψ])`, `Ω = (δψ, δA)`.
pub fn build_cs1(l: &LieAlgebra) -> Result<BVModel> {
    let bulk = "Γ";
    let mut calc = Calculus::new(l);
    calc.add_stratum(bulk, 1);
    let psi = add_lie_field(&mut calc, "ψ", 0, 1, bulk, bulk)?;
    let a = add_lie_field(&mut calc, "A", 1, 0, bulk, bulk)?;
    let (px, ax) = (psi.x(), a.x());
    let ap = calc.bracket(&ax, &px);
    let s = &calc.pair(&px, &psi.dx()).scale(&half()) + &calc.pair(&px, &ap).scale(&half());
    let omega = calc.pair(&psi.vx(), &a.vx());
    Ok(BVModel {
        name: format!("cs1[{}]", l.name()),
        source_dim: 1,
        bulk: bulk.into(),
        calc,
        fields: vec![psi, a],
        action: [(bulk.to_string(), s)].into_iter().collect(),
        omega: [(bulk.to_string(), omega)].into_iter().collect(),
        wilson: Vec::new(),
        z2: true,
        has_boundary: false,
    })
}

/// Couples a Wilson line along `curve`:
/// `S += (H, A + ξ) − (g⁺, γ)` and `Ω += (δg⁺, η) + (g⁺, ½[η,η])`,
/// with `γ` read as `ψ` in the 1D model.
///
/// For the 3D model `curve` must be a fresh label `Γ<k>`; for the 1D model
/// the line fills the source and `curve` must be `Γ`.
pub fn attach_wilson(model: &BVModel, orbit: &OrbitSpec, curve: &str) -> Result<BVModel> {
    if orbit.algebra != *model.algebra() {
        return Err(Error::Config("orbit algebra differs from the model algebra".into()));
    }
    if model.wilson.iter().any(|w| w.curve == curve) {
        return Err(Error::Config(format!("a Wilson line is already attached to `{curve}`")));
    }
    let mut m = model.clone();
    let bulk = m.bulk.clone();
    let ghost_field = match m.source_dim {
        3 => {
            let valid = curve.strip_prefix('Γ').is_some_and(|k| !k.is_empty() && k.chars().all(|c| c.is_ascii_digit()));
            if !valid {
                return Err(Error::Config(format!("unknown curve label `{curve}` (expected Γ1, Γ2, …)")));
            }
            m.calc.add_stratum(curve, 1);
            "γ"
        }
        1 => {
            if curve != bulk {
                return Err(Error::Config(format!("unknown curve label `{curve}`; the 1D Wilson line fills `{bulk}`")));
            }
            "ψ"
        }
        _ => unreachable!(),
    };
    let n = m.algebra().dim();
    let sfx = stratum_suffix(curve, &bulk);
    let calc = &mut m.calc;
    let mut mk = |bank: Bank, name: &str, a: usize, form: i32, ghost: i32, delta: i32, role: Role| -> Result<Gen> {
        calc.alpha.add(bank, GenInfo::new(&format!("{name}_{a}{sfx}"), form, ghost, delta, role).with_lie(a).on(curve))
    };
    let mut line = WilsonLine {
        curve: curve.to_string(),
        orbit: orbit.clone(),
        endpoints: None,
        h: vec![],
        xi: vec![],
        eta: vec![],
        deta: vec![],
        gplus: vec![],
        vgplus: vec![],
    };
    for a in 0..n {
        line.h.push(mk(Bank::Field, "H", a, 0, 0, 0, Role::Field)?);
        line.xi.push(mk(Bank::Field, "ξ", a, 1, 0, 0, Role::Field)?);
        line.gplus.push(mk(Bank::Field, "g⁺", a, 1, -1, 0, Role::Field)?);
        line.eta.push(mk(Bank::Delta, "η", a, 0, 0, 1, Role::DeltaImage)?);
        line.deta.push(mk(Bank::Delta, "dη", a, 1, 0, 1, Role::DeltaImage)?);
        line.vgplus.push(mk(Bank::Delta, "δg⁺", a, 1, -1, 1, Role::DeltaImage)?);
    }
    let (h, xi, eta) = (gens_poly(&line.h), gens_poly(&line.xi), gens_poly(&line.eta));
    let xih = m.calc.bracket(&xi, &h);
    let etah = m.calc.bracket(&eta, &h);
    let xixi = m.calc.bracket(&xi, &xi);
    let xieta = m.calc.bracket(&xi, &eta);
    let etaeta = m.calc.bracket(&eta, &eta);
    let kappa = d_delta_sign();
    for a in 0..n {
        m.calc.set_d(line.h[a], xih[a].clone());
        m.calc.set_delta(line.h[a], etah[a].clone());
        let dxi = m.calc.truncate(&xixi[a].scale(&half()));
        m.calc.set_d(line.xi[a], dxi);
        m.calc.set_delta(line.xi[a], (&GradedPoly::gen(line.deta[a]) - &xieta[a]).scale(&kappa));
        m.calc.set_d(line.eta[a], GradedPoly::gen(line.deta[a]));
        m.calc.set_delta(line.eta[a], etaeta[a].scale(&half()));
        m.calc.set_delta(line.gplus[a], GradedPoly::gen(line.vgplus[a]));
    }
    // δ(dη) = κ d(δη), fixed once δη is known
    for a in 0..n {
        let dd = m.calc.d(&etaeta[a].scale(&half()));
        m.calc.set_delta(line.deta[a], dd.scale(&kappa));
    }

    let gf = m.field(ghost_field).expect("ghost field").clone();
    let af = m.field("A").expect("connection").clone();
    if curve != bulk {
        let mut gens = gf.all_gens();
        gens.extend(af.all_gens());
        m.calc.restrict_gens(&gens, curve, &bulk)?;
    }
    let a_on: Vec<GradedPoly> = af.comps.iter().map(|c| m.calc.restrict(&GradedPoly::gen(c.x), curve)).collect();
    let g_on: Vec<GradedPoly> = gf.comps.iter().map(|c| m.calc.restrict(&GradedPoly::gen(c.x), curve)).collect();
    let gp = gens_poly(&line.gplus);
    let s_aux = &m.calc.pair(&h, &super::add_all(&a_on, &xi)) - &m.calc.pair(&gp, &g_on);
    let om_aux = &m.calc.pair(&gens_poly(&line.vgplus), &eta) + &m.calc.pair(&gp, &scale_all(&etaeta, &half()));

    let k = m.wilson.len() + 1;
    if m.has_boundary {
        line.endpoints = Some((format!("z{k}"), format!("z'{k}")));
    }
    let s_entry = m.action.entry(curve.to_string()).or_default();
    *s_entry = &*s_entry + &s_aux;
    let o_entry = m.omega.entry(curve.to_string()).or_default();
    *o_entry = &*o_entry + &om_aux;
    m.name.push_str(&format!("+wilson({curve})"));
    m.wilson.push(line);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::Grade;
    use crate::lie::builtin;
    use crate::variational::{D, DELTA};

    #[test]
    fn cs3_degrees_and_counts() {
        let m = build_cs3(&builtin("su2").unwrap()).unwrap();
        let s = &m.action["N"];
        for (mono, _) in s.terms() {
            assert_eq!(m.calc.form_degree(mono), 3);
            assert_eq!(m.calc.ghost(mono), 0);
            assert_eq!(m.calc.delta_degree(mono), 0);
        }
        let cubic = s.filter(|mono| mono.degree() == 3 && mono.factors().iter().all(|(g, _)| m.calc.alpha.name(*g).starts_with("A_")));
        // the six ε-triples collapse onto one antisymmetric monomial
        assert_eq!(cubic.len(), 1);
        let om = &m.omega["N"];
        for (mono, _) in om.terms() {
            assert_eq!(m.calc.delta_degree(mono), 2);
            assert_eq!(m.calc.ghost(mono), -1);
        }
    }

    #[test]
    fn abelian_cs3_has_no_cubic_terms() {
        let m = build_cs3(&builtin("abelian(1)").unwrap()).unwrap();
        let s = &m.action["N"];
        let expect = m.calc.parse("1/2 A_0 dA_0 - A⁺_0 dγ_0").unwrap();
        assert_eq!(*s, expect);
    }

    #[test]
    fn differentials_commute_and_square_to_zero() {
        let l = builtin("su2").unwrap();
        let m = build_cs1(&l).unwrap();
        let orbit = OrbitSpec::new(&l, vec![int(0), int(0), int(1)], "j").unwrap();
        let m = attach_wilson(&m, &orbit, "Γ").unwrap();
        let m3 = build_cs3(&l).unwrap();
        let m3 = attach_wilson(&m3, &orbit, "Γ1").unwrap();
        for calc in [&m.calc, &m3.calc] {
            for (g, _) in calc.alpha.gens() {
                let x = GradedPoly::gen(g);
                assert!(calc.d(&calc.d(&x)).is_zero(), "d² on {}", calc.alpha.name(g));
                assert!(calc.delta(&calc.delta(&x)).is_zero(), "δ² on {}", calc.alpha.name(g));
                assert_eq!(calc.d(&calc.delta(&x)), calc.delta(&calc.d(&x)).scale(&d_delta_sign()), "dδ on {}", calc.alpha.name(g));
            }
        }
        assert_eq!(D.plus(DELTA), Grade::new(1, 1));
    }

    #[test]
    fn wilson_attachment_errors() {
        let l = builtin("su2").unwrap();
        let orbit = OrbitSpec::new(&l, vec![int(0), int(0), int(1)], "j").unwrap();
        let m = build_cs1(&l).unwrap();
        assert!(attach_wilson(&m, &orbit, "Γ7").is_err());
        let m = attach_wilson(&m, &orbit, "Γ").unwrap();
        assert!(attach_wilson(&m, &orbit, "Γ").is_err());
        let m3 = build_cs3(&l).unwrap();
        assert!(attach_wilson(&m3, &orbit, "loop").is_err());
    }

    #[test]
    fn cs1_wilson_terms() {
        let l = builtin("su2").unwrap();
        let m = build_cs1(&l).unwrap();
        assert_eq!(m.omega["Γ"].len(), 3);
        let orbit = OrbitSpec::new(&l, vec![int(0), int(0), int(1)], "j").unwrap();
        let m = attach_wilson(&m, &orbit, "Γ").unwrap();
        let expect = m
            .calc
            .parse("1/2 ψ_0 dψ_0 + 1/2 ψ_1 dψ_1 + 1/2 ψ_2 dψ_2 + H_0 A_0 + H_1 A_1 + H_2 A_2 + H_0 ξ_0 + H_1 ξ_1 + H_2 ξ_2 - g⁺_0 ψ_0 - g⁺_1 ψ_1 - g⁺_2 ψ_2")
            .unwrap();
        let quadratic = m.action["Γ"].filter(|mono| mono.degree() == 2);
        assert_eq!(quadratic, expect);
        // (δg⁺, η) has 3 terms, (g⁺, ½[η,η]) has 3 after antisymmetry
        assert_eq!(m.omega["Γ"].len(), 3 + 3 + 3);
    }
}
