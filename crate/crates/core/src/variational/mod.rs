//! Local field calculus on stratified sources.
//!
//! A source is a set of strata (bulk `N`, curves `Γk`, the boundary surface
//! `∂N`, points `zk`), each with its own generators. Field components are
//! generators carrying form degree and ghost number; the source differential
//! `d` and the field-space differential `δ` are derivations of bidegree
//! `(1,0)` and `(0,1)` fixed by their values on generators. Forms whose
//! degree exceeds the stratum dimension are dropped.
//!
//! Integrands on different strata never multiply. Restriction to a lower
//! stratum is an algebra map sending each generator to its copy there.

mod boundary;
mod hamiltonian;
mod ibp;
mod models;

pub use boundary::{boundary_bfv, BoundaryAction, BoundaryCheck, BoundaryReport, PointTerm, SURFACE};
pub use hamiltonian::{
    bv_bracket, check_cme, hamiltonian_vf, orthogonality_reduce, orthogonality_term, variation, CmeReport, HamiltonianVF, Images, Variation,
};
pub use ibp::{is_exact, normal_form};
pub use models::{attach_wilson, build_cs1, build_cs3, BVModel, FieldSpec, OrbitSpec, WilsonLine};

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed};

use crate::grassmann::{Alphabet, Bank, Gen, GenInfo, Grade, GradedPoly, Monomial, Role};
use crate::lie::LieAlgebra;
use crate::scalar::{rat, Rational};
use crate::{Error, Result};

pub const D: Grade = Grade { p: 1, q: 0 };
pub const DELTA: Grade = Grade { p: 0, q: 1 };
/// Grade of the contraction `ι_Q`.
pub const IOTA: Grade = Grade { p: 1, q: 1 };

/// Generators attached to one component of a field on one stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldGens {
    pub x: Gen,
    pub dx: Option<Gen>,
    pub vx: Gen,
    pub vdx: Option<Gen>,
}

#[derive(Clone, Debug)]
pub struct Calculus {
    pub alpha: Alphabet,
    pub algebra: LieAlgebra,
    strata: BTreeMap<String, u32>,
    d_img: HashMap<Gen, GradedPoly>,
    delta_img: HashMap<Gen, GradedPoly>,
    /// `dv ↦ (v, ε)` when `d v = ε dv` for δ-generators `v`, `dv`.
    d_source: HashMap<Gen, (Gen, Rational)>,
    /// Root generator of every restricted copy.
    root: HashMap<Gen, Gen>,
    copies: HashMap<(Gen, String), Gen>,
    placeholders: BTreeMap<Gen, Gen>,
    placeholder_src: HashMap<Gen, Gen>,
}

pub fn stratum_suffix(stratum: &str, bulk: &str) -> String {
    if stratum == bulk {
        String::new()
    } else {
        format!("@{stratum}")
    }
}

impl Calculus {
    pub fn new(algebra: &LieAlgebra) -> Self {
        Calculus {
            alpha: Alphabet::new(),
            algebra: algebra.clone(),
            strata: BTreeMap::new(),
            d_img: HashMap::new(),
            delta_img: HashMap::new(),
            d_source: HashMap::new(),
            root: HashMap::new(),
            copies: HashMap::new(),
            placeholders: BTreeMap::new(),
            placeholder_src: HashMap::new(),
        }
    }

    pub fn add_stratum(&mut self, name: &str, dim: u32) {
        self.strata.insert(name.to_string(), dim);
    }

    pub fn has_stratum(&self, name: &str) -> bool {
        self.strata.contains_key(name)
    }

    pub fn dim(&self, stratum: &str) -> u32 {
        self.strata[stratum]
    }

    pub fn strata(&self) -> impl Iterator<Item = (&String, &u32)> {
        self.strata.iter()
    }

    pub fn stratum_of(&self, g: Gen) -> &str {
        &self.alpha.info(g).stratum
    }

    pub fn set_d(&mut self, g: Gen, img: GradedPoly) {
        if let Some((t, eps)) = signed_gen(&img) {
            if self.alpha.info(g).delta == 1 && self.alpha.info(t).delta == 1 {
                self.d_source.insert(t, (g, eps));
            }
        }
        self.alpha.info_mut(g).d_partner = single_gen(&img);
        self.d_img.insert(g, img);
    }

    pub fn set_delta(&mut self, g: Gen, img: GradedPoly) {
        self.alpha.info_mut(g).delta_partner = single_gen(&img);
        self.delta_img.insert(g, img);
    }

    pub fn d_image(&self, g: Gen) -> Option<&GradedPoly> {
        self.d_img.get(&g)
    }

    pub fn delta_image(&self, g: Gen) -> Option<&GradedPoly> {
        self.delta_img.get(&g)
    }

    /// The δ-generator `v` and sign `ε` with `d v = ε dv`, if any.
    pub fn d_source(&self, dv: Gen) -> Option<(Gen, Rational)> {
        self.d_source.get(&dv).cloned()
    }

    pub fn root(&self, g: Gen) -> Gen {
        self.root.get(&g).copied().unwrap_or(g)
    }

    /// Adds one component of a field together with its d- and δ-partners.
    /// `dx` is omitted when its form degree exceeds the stratum dimension.
    pub fn add_field(&mut self, name: &str, lie: Option<usize>, form: i32, ghost: i32, stratum: &str, bulk: &str) -> Result<FieldGens> {
        let dim = self.dim(stratum) as i32;
        if form > dim {
            return Err(Error::Precondition(format!("{name} has form degree {form} > {dim}")));
        }
        let sfx = stratum_suffix(stratum, bulk);
        let mk = |n: &str, f: i32, dl: i32, role: Role| {
            let mut i = GenInfo::new(&format!("{n}{sfx}"), f, ghost, dl, role).on(stratum);
            i.lie = lie;
            i
        };
        let x = self.alpha.add(Bank::Field, mk(name, form, 0, Role::Field))?;
        let vx = self.alpha.add(Bank::Delta, mk(&format!("δ{name}"), form, 1, Role::DeltaImage))?;
        let (dx, vdx) = if form < dim {
            let dx = self.alpha.add(Bank::Field, mk(&format!("d{name}"), form + 1, 0, Role::DImage))?;
            let vdx = self.alpha.add(Bank::Delta, mk(&format!("δd{name}"), form + 1, 1, Role::DeltaImage))?;
            (Some(dx), Some(vdx))
        } else {
            (None, None)
        };
        self.set_d(x, dx.map(GradedPoly::gen).unwrap_or_default());
        self.set_delta(x, GradedPoly::gen(vx));
        if let (Some(dx), Some(vdx)) = (dx, vdx) {
            self.set_delta(dx, GradedPoly::gen(vdx));
            self.set_d(vx, GradedPoly::gen(vdx).scale(&d_delta_sign()));
        }
        Ok(FieldGens { x, dx, vx, vdx })
    }

    /// Form degree of a monomial.
    pub fn form_degree(&self, m: &Monomial) -> i32 {
        m.factors().iter().map(|(g, e)| self.alpha.info(*g).form * *e as i32).sum()
    }

    pub fn ghost(&self, m: &Monomial) -> i32 {
        m.factors().iter().map(|(g, e)| self.alpha.info(*g).ghost * *e as i32).sum()
    }

    pub fn delta_degree(&self, m: &Monomial) -> i32 {
        m.factors().iter().map(|(g, e)| self.alpha.info(*g).delta * *e as i32).sum()
    }

    /// Drops monomials whose form degree exceeds their stratum dimension.
    pub fn truncate(&self, p: &GradedPoly) -> GradedPoly {
        p.filter(|m| match m.factors().first() {
            None => true,
            Some((g, _)) => self.form_degree(m) <= self.dim(self.stratum_of(*g)) as i32,
        })
    }

    pub fn mul(&self, a: &GradedPoly, b: &GradedPoly) -> GradedPoly {
        self.truncate(&a.mul_poly(b))
    }

    pub fn d(&self, p: &GradedPoly) -> GradedPoly {
        self.truncate(&p.apply_derivation(D, &|g| self.d_img.get(&g).cloned()))
    }

    pub fn delta(&self, p: &GradedPoly) -> GradedPoly {
        self.truncate(&p.apply_derivation(DELTA, &|g| self.delta_img.get(&g).cloned()))
    }

    /// Copy of the root of `g` on `stratum`, or `None` when the form degree
    /// is too high there.
    pub fn copy(&self, g: Gen, stratum: &str) -> Option<Gen> {
        let r = self.root(g);
        if self.stratum_of(r) == stratum {
            return Some(r);
        }
        self.copies.get(&(r, stratum.to_string())).copied()
    }

    /// Creates restricted copies of the generators in `gens` on `stratum`
    /// and transports their d- and δ-images.
    pub fn restrict_gens(&mut self, gens: &[Gen], stratum: &str, bulk: &str) -> Result<()> {
        let dim = self.dim(stratum) as i32;
        let mut created = Vec::new();
        for &g in gens {
            let r = self.root(g);
            if self.copies.contains_key(&(r, stratum.to_string())) || self.stratum_of(r) == stratum {
                continue;
            }
            let info = self.alpha.info(r).clone();
            if info.form > dim {
                continue;
            }
            let base = info.name.split('@').next().unwrap_or(&info.name).to_string();
            let mut ni = info.clone();
            ni.name = format!("{base}{}", stratum_suffix(stratum, bulk));
            ni.stratum = stratum.to_string();
            ni.d_partner = None;
            ni.delta_partner = None;
            let bank = if info.delta > 0 { Bank::Delta } else { Bank::Field };
            let c = self.alpha.add(bank, ni)?;
            self.root.insert(c, r);
            self.copies.insert((r, stratum.to_string()), c);
            created.push((r, c));
        }
        for (r, c) in created {
            if let Some(img) = self.d_img.get(&r).cloned() {
                let ri = self.restrict(&img, stratum);
                self.set_d(c, ri);
            }
            if let Some(img) = self.delta_img.get(&r).cloned() {
                let ri = self.restrict(&img, stratum);
                self.set_delta(c, ri);
            }
        }
        Ok(())
    }

    /// Restriction to `stratum`; generators without a copy there vanish.
    pub fn restrict(&self, p: &GradedPoly, stratum: &str) -> GradedPoly {
        let zero = GradedPoly::zero();
        self.truncate(&p.substitute(&|g| Some(self.copy(g, stratum).map(GradedPoly::gen).unwrap_or_else(|| zero.clone()))))
    }

    /// Placeholder `U_v` standing for `ι_Q(v)`.
    pub fn placeholder(&mut self, v: Gen) -> Result<Gen> {
        if let Some(u) = self.placeholders.get(&v) {
            return Ok(*u);
        }
        let info = self.alpha.info(v).clone();
        let mut ni = GenInfo::new(&format!("U[{}]", info.name), info.form, info.ghost + 1, 0, Role::Auxiliary).on(&info.stratum);
        ni.lie = info.lie;
        let u = self.alpha.add(Bank::Aux, ni)?;
        self.placeholders.insert(v, u);
        self.placeholder_src.insert(u, v);
        Ok(u)
    }

    pub fn placeholder_of(&self, v: Gen) -> Option<Gen> {
        self.placeholders.get(&v).copied()
    }

    /// The δ-generator a placeholder stands for.
    pub fn placeholder_source(&self, u: Gen) -> Option<Gen> {
        self.placeholder_src.get(&u).copied()
    }

    /// `(X, Y) = Σ_a X_a Y_a` for component lists.
    pub fn pair(&self, x: &[GradedPoly], y: &[GradedPoly]) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (a, b) in x.iter().zip(y) {
            out = &out + &self.mul(a, b);
        }
        out
    }

    /// `[X, Y]_c = Σ f_abc X_a Y_b`.
    pub fn bracket(&self, x: &[GradedPoly], y: &[GradedPoly]) -> Vec<GradedPoly> {
        let mut out = vec![GradedPoly::zero(); self.algebra.dim()];
        for (a, b, c, f) in self.algebra.nonzero() {
            out[c].add_scaled(&self.mul(&x[a], &y[b]), &f);
        }
        out
    }

    /// Formats a polynomial with this calculus' generator names.
    pub fn fmt(&self, p: &GradedPoly) -> String {
        p.format(&self.alpha)
    }

    pub fn parse(&self, s: &str) -> Result<GradedPoly> {
        GradedPoly::parse(s, &self.alpha)
    }
}

fn signed_gen(p: &GradedPoly) -> Option<(Gen, Rational)> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    if c.abs() != Rational::one() || m.factors().len() != 1 || m.factors()[0].1 != 1 {
        return None;
    }
    Some((m.factors()[0].0, c.clone()))
}

fn single_gen(p: &GradedPoly) -> Option<Gen> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    if !c.is_one() || m.factors().len() != 1 || m.factors()[0].1 != 1 {
        return None;
    }
    Some(m.factors()[0].0)
}

/// `dδ = κ δd`.
pub(crate) fn d_delta_sign() -> Rational {
    if D.odd_with(DELTA) {
        rat(-1, 1)
    } else {
        rat(1, 1)
    }
}

pub fn gens_poly(gs: &[Gen]) -> Vec<GradedPoly> {
    gs.iter().map(|g| GradedPoly::gen(*g)).collect()
}

pub fn scale_all(v: &[GradedPoly], c: &Rational) -> Vec<GradedPoly> {
    v.iter().map(|p| p.scale(c)).collect()
}

pub fn add_all(a: &[GradedPoly], b: &[GradedPoly]) -> Vec<GradedPoly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn half() -> Rational {
    rat(1, 2)
}

pub(crate) fn sixth() -> Rational {
    rat(1, 6)
}
