//! Versioned JSON reports and the check suites behind the command-line tool.
//!
//! A report is `{schema, command, config, status, summary, checks, data}`.
//! Each check is `{name, paperEq, status, residual}`. All numbers are
//! written as strings: exact values in their rational form, floating-point
//! residuals in fixed `{:.3e}` notation. Maps are ordered, so identical
//! configurations give identical bytes.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::bfv_states::{bfv_charge, boundary_space, cohomology, insertion_algebra_check, parse_point, BoundaryHilbert};
use crate::grassmann::GradedPoly;
use crate::lie::{builtin, check_invariance, check_jacobi, parse_rep, rep_su2, LieAlgebra};
use crate::matrix::fmt_gauss;
use crate::orbit::{holonomy_invariance, kirillov_richardson, tangent_orthogonality, wilson_holonomy, Holonomy};
use crate::scalar::{int, rat, Rational};
use crate::variational::{
    attach_wilson, boundary_bfv, build_cs1, build_cs3, check_cme, hamiltonian_vf, orthogonality_term, BVModel, OrbitSpec, SURFACE,
};
use crate::weil::{centrality_check, cubic_dirac_with, diagonal_action_ok, dirac_square_check, dirac_square_check_f64, spinor_rep};
use crate::{Error, Result};

pub const SCHEMA: u32 = 1;

/// Anchor strings naming the relation each check verifies.
pub mod anchor {
    pub const CME: &str = "½{S,S} = 0 for the Chern-Simons BV action";
    pub const CME_WILSON: &str = "½{S,S} ∝ (H, g⁺), which vanishes since (H, [x, H]) = 0";
    pub const ALGEBRA: &str = "f_abc totally antisymmetric and satisfying Jacobi";
    pub const HAMILTONIAN: &str = "ι_QΩ = δS − dα";
    pub const BFV: &str = "Ω_∂ = δα_∂, δS_∂ = ι_QΩ_∂ on boundary strata";
    pub const BFV_CLOSED_FORM: &str = "closed-form Ω_∂ and S_∂ with signed point terms";
    pub const BFV_MASTER: &str = "{S_∂, S_∂} = Σ_points ±(T0, T0) = 0";
    pub const DIRAC: &str = "𝔇² = ½Ĉ − (1/48)Σf² · Id";
    pub const CENTRALITY: &str = "[𝔇², ·] = 0 on the quantum Weil algebra";
    pub const DIAGONAL: &str = "[Ĝ_a, Ĝ_b] = ħ f_abc Ĝ_c";
    pub const COHOMOLOGY: &str = "H⁰ of the quantised boundary charge Ŝ_∂";
    pub const INSERTION: &str = "[X̂_a, X̂_b] = ħ f_abc X̂_c for every ρ_k";
    pub const KIRILLOV: &str = "ω_G = δα_G = −(H, ½[δg g⁻¹, δg g⁻¹])";
    pub const NORM: &str = "(H, H) = (T0, T0) for H = Ad_g T0";
    pub const TANGENT: &str = "(H, [x, H]) = 0";
    pub const HOLONOMY: &str = "W = Tr_R Pexp ∫_Γ A";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub paper_eq: String,
    pub status: Status,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub data: Map<String, Value>,
}

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.3e}")
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), config: BTreeMap::new(), checks: Vec::new(), data: Map::new() }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_string(), value.to_string());
    }

    pub fn check(&mut self, name: impl Into<String>, anchor: &str, ok: bool, residual: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.checks.push(Check { name: name.into(), paper_eq: anchor.to_string(), status, residual: residual.into() });
    }

    pub fn info(&mut self, name: impl Into<String>, anchor: &str, residual: impl Into<String>) {
        self.checks.push(Check { name: name.into(), paper_eq: anchor.to_string(), status: Status::Info, residual: residual.into() });
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Folds a sub-report into this one, prefixing check names.
    pub fn absorb(&mut self, prefix: &str, sub: Report) {
        let summary = json!({ "status": if sub.ok() { "pass" } else { "fail" }, "checks": sub.checks.len().to_string() });
        for mut c in sub.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        self.data.insert(prefix.to_string(), summary);
    }

    /// Records an error from a sub-run as a failed check.
    pub fn absorb_result(&mut self, prefix: &str, sub: Result<Report>) {
        match sub {
            Ok(r) => self.absorb(prefix, r),
            Err(e) => {
                self.check(format!("{prefix}/error"), "", false, e.to_string());
                self.data.insert(prefix.to_string(), json!({ "status": "error" }));
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count().to_string();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "paperEq": c.paper_eq, "status": c.status.as_str(), "residual": c.residual }))
            .collect();
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "status": if self.ok() { "pass" } else { "fail" },
            "summary": { "pass": count(Status::Pass), "fail": count(Status::Fail), "info": count(Status::Info) },
            "checks": checks,
            "data": Value::Object(self.data.clone()),
        })
    }

    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_pretty())?;
        Ok(())
    }
}

/// Builtin name or path to a JSON file.
pub fn load_algebra(source: &str) -> Result<LieAlgebra> {
    let p = Path::new(source);
    if source.ends_with(".json") || p.is_file() {
        LieAlgebra::load_json(p)
    } else {
        builtin(source)
    }
}

pub fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| crate::scalar::parse_rational(t.trim()).ok_or_else(|| Error::Config(format!("bad rational `{t}` in `{s}`"))))
        .collect()
}

fn fmt_vec(v: &[Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Cs3,
    Cs1,
}

impl ModelKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cs3" => Ok(ModelKind::Cs3),
            "cs1" => Ok(ModelKind::Cs1),
            _ => Err(Error::Config(format!("unknown model `{s}` (expected cs3 or cs1)"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Cs3 => "cs3",
            ModelKind::Cs1 => "cs1",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub algebra: LieAlgebra,
    pub lines: usize,
    /// Orbit representative; unit vector along the last basis element when absent.
    pub t0: Option<Vec<Rational>>,
    pub boundary: bool,
}

impl ModelConfig {
    pub fn new(kind: ModelKind, algebra: LieAlgebra) -> Self {
        ModelConfig { kind, algebra, lines: 0, t0: None, boundary: false }
    }

    pub fn t0(&self) -> Vec<Rational> {
        self.t0.clone().unwrap_or_else(|| {
            let n = self.algebra.dim();
            (0..n).map(|i| if i + 1 == n { Rational::one() } else { Rational::zero() }).collect()
        })
    }

    pub fn build(&self) -> Result<BVModel> {
        let mut m = match self.kind {
            ModelKind::Cs3 => build_cs3(&self.algebra)?,
            ModelKind::Cs1 => build_cs1(&self.algebra)?,
        };
        if self.boundary {
            m = m.with_boundary()?;
        }
        if self.kind == ModelKind::Cs1 && self.lines > 1 {
            return Err(Error::Config("the 1D model carries at most one Wilson line".into()));
        }
        let orbit = OrbitSpec::new(&self.algebra, self.t0(), "R")?;
        for k in 0..self.lines {
            let curve = match self.kind {
                ModelKind::Cs3 => format!("Γ{}", k + 1),
                ModelKind::Cs1 => "Γ".to_string(),
            };
            m = attach_wilson(&m, &orbit, &curve)?;
        }
        Ok(m)
    }

    fn record(&self, r: &mut Report) {
        r.set("model", self.kind.as_str());
        r.set("algebra", self.algebra.name());
        r.set("lines", self.lines);
        if self.lines > 0 {
            r.set("t0", fmt_vec(&self.t0()));
        }
        r.set("boundary", self.boundary);
    }
}

fn poly_map<'a>(m: &BVModel, it: impl Iterator<Item = (&'a String, &'a GradedPoly)>) -> Value {
    Value::Object(it.map(|(k, p)| (k.clone(), Value::String(m.fmt(p)))).collect())
}

pub fn verify_cme(cfg: &ModelConfig) -> Result<Report> {
    let mut r = Report::new("verify-cme");
    cfg.record(&mut r);
    let jac = check_jacobi(&cfg.algebra);
    r.check("jacobi", anchor::ALGEBRA, jac.ok, jac.max_violation.to_string());
    let inv = check_invariance(&cfg.algebra);
    let wit = inv.witness.map(|(a, b, c)| format!("f[{a}][{b}][{c}] + f[{a}][{c}][{b}] ≠ 0")).unwrap_or_else(|| "0".into());
    r.check("invariance", anchor::ALGEBRA, inv.ok, wit);
    let m = cfg.build()?;
    let cme = check_cme(&m)?;
    for (x, ok) in &cme.consistent {
        r.check(format!("hamiltonian[{x}]"), anchor::HAMILTONIAN, *ok, if *ok { "0" } else { "nonzero" });
    }
    let mut strata = Map::new();
    for (x, s) in &cme.strata {
        for w in m.wilson.iter().filter(|w| &w.curve == x) {
            let rel = orthogonality_term(&m.calc, w);
            let k = s.before_rewrite.multiple_of(&rel).filter(|k| !k.is_zero());
            r.check(
                format!("cme-single-term[{x}]"),
                anchor::CME_WILSON,
                k.is_some(),
                match &k {
                    Some(k) => format!("{k}·({})", m.fmt(&rel)),
                    None => m.fmt(&s.before_rewrite),
                },
            );
        }
        r.check(format!("cme[{x}]"), anchor::CME, s.residue.is_zero(), m.fmt(&s.residue));
        strata.insert(
            x.clone(),
            json!({
                "raw": m.fmt(&s.raw),
                "beforeRewrite": m.fmt(&s.before_rewrite),
                "residue": m.fmt(&s.residue),
                "flux": m.fmt(&s.flux),
            }),
        );
    }
    r.data.insert("strata".into(), Value::Object(strata));
    let hv = hamiltonian_vf(&m)?;
    let mut q = Map::new();
    let mut el = Map::new();
    let bulk = &hv.variations[&m.bulk];
    for f in &m.fields {
        for c in &f.comps {
            let name = m.fmt(&GradedPoly::gen(c.x));
            q.insert(name.clone(), Value::String(hv.calc.fmt(&hv.image(c.x))));
            let e = bulk.euler_lagrange.get(&c.vx).cloned().unwrap_or_default();
            el.insert(name, Value::String(hv.calc.fmt(&e)));
        }
    }
    r.data.insert("q".into(), Value::Object(q));
    r.data.insert("eulerLagrange".into(), Value::Object(el));
    r.data.insert("action".into(), poly_map(&m, m.action.iter()));
    Ok(r)
}

fn boundary_anchor(name: &str) -> &'static str {
    if name.starts_with("reference") || name == "point-pairs" {
        anchor::BFV_CLOSED_FORM
    } else if name.starts_with("master") {
        anchor::BFV_MASTER
    } else {
        anchor::BFV
    }
}

pub fn derive_bfv(cfg: &ModelConfig) -> Result<Report> {
    let mut cfg = cfg.clone();
    cfg.boundary = true;
    let mut r = Report::new("derive-bfv");
    cfg.record(&mut r);
    let m = cfg.build()?;
    let b = boundary_bfv(&m)?;
    for c in &b.checks {
        r.check(c.name.clone(), boundary_anchor(&c.name), c.ok, c.detail.clone());
    }
    if let Some(s) = b.master.get(SURFACE) {
        // surface part of the boundary master equation is reported only
        r.info(format!("master[{}]", SURFACE), anchor::BFV_MASTER, b.fmt(s));
    }
    let f = |p: &GradedPoly| Value::String(b.fmt(p));
    let points = |a: &crate::variational::BoundaryAction| -> Value {
        a.points
            .iter()
            .map(|p| json!({ "point": p.point, "sign": p.sign.to_string(), "line": p.orbit.to_string(), "term": b.fmt(&p.term) }))
            .collect()
    };
    r.data.insert("alpha".into(), Value::Object(b.alpha.iter().map(|(k, p)| (k.clone(), f(p))).collect()));
    r.data.insert("omega".into(), Value::Object(b.omega.iter().map(|(k, p)| (k.clone(), f(p))).collect()));
    r.data.insert("surface".into(), b.action.surface.as_ref().map(f).unwrap_or(Value::Null));
    r.data.insert("points".into(), points(&b.action));
    r.data.insert(
        "closedForm".into(),
        json!({
            "surface": b.reference.surface.as_ref().map(f).unwrap_or(Value::Null),
            "points": points(&b.reference),
            "omega": Value::Object(b.reference_omega.iter().map(|(k, p)| (k.clone(), f(p))).collect()),
        }),
    );
    r.data.insert("master".into(), Value::Object(b.master.iter().map(|(k, p)| (k.clone(), f(p))).collect()));
    if let Some((per, total)) = &b.point_sum {
        let per: Map<String, Value> = per.iter().map(|(k, c)| (k.clone(), Value::String(format!("{c}·(H,H)")))).collect();
        r.data.insert("pointSum".into(), json!({ "perPoint": per, "total": total.to_string() }));
    }
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct DiracConfig {
    pub algebra: LieAlgebra,
    pub rep: String,
    pub hbar: Rational,
    pub cubic: Rational,
    /// Floating-point mode with this tolerance.
    pub tolerance: Option<f64>,
}

impl DiracConfig {
    pub fn new(algebra: LieAlgebra, rep: &str, hbar: Rational) -> Self {
        DiracConfig { algebra, rep: rep.to_string(), hbar, cubic: rat(1, 6), tolerance: None }
    }
}

pub fn dirac(cfg: &DiracConfig) -> Result<Report> {
    let mut r = Report::new("dirac");
    r.set("algebra", cfg.algebra.name());
    r.set("rep", &cfg.rep);
    r.set("hbar", &cfg.hbar);
    r.set("cubic", &cfg.cubic);
    r.set("mode", if cfg.tolerance.is_some() { "float" } else { "exact" });
    if let Some(t) = cfg.tolerance {
        if t <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        r.set("tolerance", fmt_f64(t));
    }
    if cfg.hbar <= Rational::zero() {
        return Err(Error::Config("ħ must be positive".into()));
    }
    let l = &cfg.algebra;
    let rep = parse_rep(l, &cfg.rep, &cfg.hbar)?;
    let cliff = spinor_rep(l, cfg.hbar.clone());
    let d = cubic_dirac_with(l, &rep, &cliff, cfg.cubic.clone())?;
    match cfg.tolerance {
        Some(t) => {
            let (ok, err) = dirac_square_check_f64(&d, t);
            r.check("square-identity", anchor::DIRAC, ok, fmt_f64(err));
        }
        None => {
            let sq = dirac_square_check(&d);
            r.check(
                "square-identity",
                anchor::DIRAC,
                sq.identity_ok,
                if sq.identity_ok { "0".into() } else { fmt_f64(sq.max_off_identity_err) },
            );
            let lit = if sq.literal_ok { "holds" } else { "differs" };
            if cfg.hbar.is_one() {
                r.check("square-literal", anchor::DIRAC, sq.literal_ok, lit);
            } else {
                r.info("square-literal", anchor::DIRAC, format!("{lit}; the ħ-weighted form is checked above"));
            }
            r.data.insert("c".into(), sq.c.map(|c| Value::String(c.to_string())).unwrap_or(Value::Null));
        }
    }
    let cen = centrality_check(&d);
    r.check(
        "centrality",
        anchor::CENTRALITY,
        cen.ok,
        if cen.ok { "0".into() } else { format!("{} fails for {}", fmt_f64(cen.max_err), cen.failures.join(",")) },
    );
    let diag = diagonal_action_ok(&d);
    r.check("diagonal-action", anchor::DIAGONAL, diag, if diag { "0" } else { "nonzero" });
    r.data.insert("dimV".into(), Value::String(rep.dim_v.to_string()));
    r.data.insert("dimS".into(), Value::String(cliff.dim_s.to_string()));
    r.data.insert("fSquared".into(), Value::String(l.f_squared().to_string()));
    if d.dim() <= 16 {
        let rows: Vec<Value> = (0..d.dim()).map(|i| (0..d.dim()).map(|j| Value::String(fmt_gauss(d.m.get(i, j)))).collect()).collect();
        r.data.insert("matrix".into(), json!({ "scale": "√(ħ/2)", "entries": rows }));
    }
    Ok(r)
}

pub fn cohomology_report(points: &[String], hbar: &Rational) -> Result<Report> {
    let mut r = Report::new("cohomology");
    r.set("points", points.join(" "));
    r.set("hbar", hbar);
    if *hbar <= Rational::zero() {
        return Err(Error::Config("ħ must be positive".into()));
    }
    let pts = points.iter().enumerate().map(|(i, p)| parse_point(p, hbar, i)).collect::<Result<Vec<_>>>()?;
    let h = boundary_space(&pts)?;
    r.check("koszul", anchor::COHOMOLOGY, cross_terms_vanish(&h)?, "0");
    let q = bfv_charge(&h)?;
    let c = cohomology(&h, &q)?;
    let scalar = c.charge_squared_scalar.is_some();
    r.check("square-scalar", anchor::COHOMOLOGY, scalar, if scalar { "0".to_string() } else { fmt_f64(c.off_scalar_residual) });
    if let Some(ok) = c.homotopy_ok {
        r.check("homotopy", anchor::COHOMOLOGY, ok, if ok { "0" } else { "nonzero" });
    }
    r.info("verdict", anchor::COHOMOLOGY, c.verdict.as_str());
    let pair = |v: [usize; 2]| json!({ "even": v[0].to_string(), "odd": v[1].to_string() });
    r.data.insert("dim".into(), Value::String(h.dim().to_string()));
    r.data.insert("chargeSquared".into(), c.charge_squared_scalar.as_ref().map(|x| Value::String(x.to_string())).unwrap_or(Value::Null));
    r.data.insert("space".into(), pair(c.space_dim));
    r.data.insert("kernel".into(), pair(c.kernel_dim));
    r.data.insert("image".into(), pair(c.image_dim));
    r.data.insert("cohomology".into(), c.cohomology_dim.map(pair).unwrap_or(Value::Null));
    r.data.insert("verdict".into(), Value::String(c.verdict.as_str().into()));
    Ok(r)
}

fn cross_terms_vanish(h: &BoundaryHilbert) -> Result<bool> {
    let e: Vec<_> = (0..h.dirac.len()).map(|k| h.embed(k, &h.dirac[k].m, true)).collect::<Result<_>>()?;
    Ok((0..e.len()).all(|i| (i + 1..e.len()).all(|j| e[i].anticommutator(&e[j]).is_zero())))
}

#[derive(Clone, Debug)]
pub struct OrbitConfig {
    pub algebra: LieAlgebra,
    pub t0: Vec<Rational>,
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub tolerance: f64,
}

impl OrbitConfig {
    pub fn new(algebra: LieAlgebra, t0: Vec<Rational>, seed: u64) -> Self {
        OrbitConfig { algebra, t0, samples: 100, seed, step: 1e-5, tolerance: 1e-6 }
    }
}

pub fn orbit_check(cfg: &OrbitConfig) -> Result<Report> {
    let mut r = Report::new("orbit-check");
    r.set("algebra", cfg.algebra.name());
    r.set("t0", fmt_vec(&cfg.t0));
    r.set("samples", cfg.samples);
    r.set("seed", cfg.seed);
    r.set("step", fmt_f64(cfg.step));
    r.set("tolerance", fmt_f64(cfg.tolerance));
    if cfg.tolerance <= 0.0 {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    let spec = OrbitSpec::new(&cfg.algebra, cfg.t0.clone(), "R")?;
    let k = kirillov_richardson(&spec, cfg.samples, cfg.seed, cfg.step)?;
    r.check("kirillov", anchor::KIRILLOV, k.coarse.max_err <= cfg.tolerance, fmt_f64(k.coarse.max_err));
    r.check("kirillov-antisymmetry", anchor::KIRILLOV, k.coarse.max_antisymmetry <= 1e-15, fmt_f64(k.coarse.max_antisymmetry));
    // an exact zero at both steps is converged as well
    let converged = k.ratio >= 3.0;
    r.check("kirillov-halving", anchor::KIRILLOV, converged, format!("ratio {}", fmt_f64(k.ratio)));
    r.check("norm", anchor::NORM, k.coarse.max_norm_err <= 1e-9, fmt_f64(k.coarse.max_norm_err));
    let t = tangent_orthogonality(&spec, cfg.samples, cfg.seed, None)?;
    r.check("tangent-orthogonality", anchor::TANGENT, t.max_err <= 1e-12, fmt_f64(t.max_err));
    r.data.insert("maxErr".into(), Value::String(fmt_f64(k.coarse.max_err)));
    r.data.insert("maxErrHalfStep".into(), Value::String(fmt_f64(k.fine.max_err)));
    Ok(r)
}

#[derive(Clone, Debug)]
pub struct WilsonConfig {
    pub algebra: LieAlgebra,
    pub rep: String,
    pub configs: usize,
    pub segments: usize,
    pub seed: u64,
    /// Explicit connection to evaluate, one algebra vector per segment.
    pub connection: Option<Vec<Vec<f64>>>,
    pub closed: bool,
}

impl WilsonConfig {
    pub fn new(algebra: LieAlgebra, rep: &str, seed: u64) -> Self {
        WilsonConfig { algebra, rep: rep.to_string(), configs: 50, segments: 8, seed, connection: None, closed: true }
    }
}

fn fmt_c64(z: &crate::orbit::C64) -> String {
    format!("{}{}{}i", fmt_f64(z.re), if z.im < 0.0 { "" } else { "+" }, fmt_f64(z.im))
}

pub fn wilson(cfg: &WilsonConfig) -> Result<Report> {
    let mut r = Report::new("wilson");
    r.set("algebra", cfg.algebra.name());
    r.set("rep", &cfg.rep);
    r.set("configs", cfg.configs);
    r.set("segments", cfg.segments);
    r.set("seed", cfg.seed);
    if cfg.segments == 0 {
        return Err(Error::Config("segment count must be at least 1".into()));
    }
    let rep = parse_rep(&cfg.algebra, &cfg.rep, &Rational::one())?;
    if let Some(a) = &cfg.connection {
        r.set("closed", cfg.closed);
        let v = match wilson_holonomy(&rep, a, cfg.closed)? {
            Holonomy::Trace(t) => json!({ "trace": fmt_c64(&t) }),
            Holonomy::Matrix(m) => {
                let rows: Vec<Value> =
                    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Value::String(fmt_c64(&m[(i, j)]))).collect()).collect();
                json!({ "matrix": rows })
            }
        };
        r.data.insert("holonomy".into(), v);
    }
    let h = holonomy_invariance(&rep, cfg.configs, cfg.segments, cfg.seed)?;
    r.check("gauge-invariance", anchor::HOLONOMY, h.max_gauge_err <= 1e-10, fmt_f64(h.max_gauge_err));
    r.check("cyclic-invariance", anchor::HOLONOMY, h.max_cyclic_err <= 1e-12, fmt_f64(h.max_cyclic_err));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    PaperAll,
    Symbolic,
    Quantum,
    Numeric,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper-all" => Ok(Suite::PaperAll),
            "symbolic" => Ok(Suite::Symbolic),
            "quantum" => Ok(Suite::Quantum),
            "numeric" => Ok(Suite::Numeric),
            _ => Err(Error::Config(format!("unknown suite `{s}` (paper-all, symbolic, quantum, numeric)"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::PaperAll => "paper-all",
            Suite::Symbolic => "symbolic",
            Suite::Quantum => "quantum",
            Suite::Numeric => "numeric",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Overrides the cubic coefficient of every Dirac operator.
    pub cubic: Option<Rational>,
}

pub const CME_ALGEBRAS: [&str; 6] = ["su2", "so3", "abelian(1)", "abelian(2)", "abelian(3)", "su2+abelian(1)"];
pub const SPINS: [&str; 5] = ["0", "0.5", "1", "1.5", "2"];

/// `su2 ⊕ abelian(2)` with `f_034` shifted by `1/3` in all slots. Below
/// dimension five every invariant `f` satisfies Jacobi.
pub fn mutated_algebra() -> Result<LieAlgebra> {
    Ok(builtin("su2+abelian(2)")?.perturbed_total(0, 3, 4, rat(1, 3)))
}

fn symbolic(r: &mut Report) -> Result<()> {
    for a in CME_ALGEBRAS {
        let cfg = ModelConfig::new(ModelKind::Cs3, builtin(a)?);
        r.absorb_result(&format!("cme-cs3[{a}]"), verify_cme(&cfg));
    }
    // an invariant deformation that breaks Jacobi must leave a residue
    let bad = mutated_algebra()?;
    let res = verify_cme(&ModelConfig::new(ModelKind::Cs3, bad))?;
    let jacobi_broken = res.find("jacobi").is_some_and(|c| c.status == Status::Fail);
    let detected = jacobi_broken && res.checks.iter().any(|c| c.name.starts_with("cme[") && c.status == Status::Fail);
    r.check("cme-cs3[mutated]/detected", anchor::CME, detected, if detected { "nonzero residue" } else { "residue vanished" });
    let su2 = builtin("su2")?;
    let mut one = ModelConfig::new(ModelKind::Cs1, su2.clone());
    one.lines = 1;
    r.absorb_result("cme-cs1-wilson", verify_cme(&one));
    let mut three = ModelConfig::new(ModelKind::Cs3, su2);
    three.lines = 2;
    r.absorb_result("bfv-cs3", derive_bfv(&three));
    r.absorb_result("bfv-cs1", derive_bfv(&one));
    Ok(())
}

fn quantum(r: &mut Report, cubic: &Option<Rational>) -> Result<()> {
    let su2 = builtin("su2")?;
    for j in SPINS {
        for h in [1, 2] {
            let mut cfg = DiracConfig::new(su2.clone(), j, int(h));
            if let Some(k) = cubic {
                cfg.cubic = k.clone();
            }
            r.absorb_result(&format!("dirac[j={j},ħ={h}]"), dirac(&cfg));
        }
    }
    let mut bad = DiracConfig::new(su2.clone(), "0.5", int(1));
    bad.cubic = rat(1, 5);
    let res = dirac(&bad)?;
    let detected = res.find("centrality").is_some_and(|c| c.status == Status::Fail);
    r.check("dirac[perturbed]/detected", anchor::CENTRALITY, detected, if detected { "centrality fails" } else { "not detected" });
    for j1 in SPINS {
        for j2 in SPINS {
            r.absorb_result(&format!("cohomology[+{j1},-{j2}]"), cohomology_report(&[format!("+su2:{j1}"), format!("-su2:{j2}")], &int(1)));
        }
    }
    r.absorb_result("cohomology[abelian]", cohomology_report(&["+abelian(2):triv:1".into(), "-abelian(2):triv:1".into()], &int(1)));
    let ins = insertion_algebra_check(&[rep_su2(1, int(1)), rep_su2(2, int(1))])?;
    r.check("insertions[1/2,1]", anchor::INSERTION, ins.ok(), if ins.ok() { "0" } else { "inconsistent" });
    Ok(())
}

fn numeric(r: &mut Report, seed: u64) -> Result<()> {
    let su2 = builtin("su2")?;
    r.absorb_result("orbit[su2]", orbit_check(&OrbitConfig::new(su2.clone(), vec![int(0), int(0), int(1)], seed)));
    r.absorb_result("orbit[abelian(2)]", orbit_check(&OrbitConfig::new(builtin("abelian(2)")?, vec![int(1), int(-1)], seed)));
    for j in ["0.5", "1"] {
        r.absorb_result(&format!("wilson[j={j}]"), wilson(&WilsonConfig::new(su2.clone(), j, seed)));
    }
    Ok(())
}

pub fn suite(cfg: &SuiteConfig) -> Result<Report> {
    let mut r = Report::new("suite");
    r.set("suite", cfg.suite.as_str());
    r.set("seed", cfg.seed);
    if let Some(k) = &cfg.cubic {
        r.set("cubic", k);
    }
    let s = cfg.suite;
    if matches!(s, Suite::PaperAll | Suite::Symbolic) {
        symbolic(&mut r)?;
    }
    if matches!(s, Suite::PaperAll | Suite::Quantum) {
        quantum(&mut r, &cfg.cubic)?;
    }
    if matches!(s, Suite::PaperAll | Suite::Numeric) {
        numeric(&mut r, cfg.seed)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = Report::new("x");
        r.set("k", 3);
        r.check("a", "rel", true, "0");
        r.info("b", "rel", "note");
        let v = r.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["status"], "pass");
        assert_eq!(v["config"]["k"], "3");
        assert_eq!(v["checks"][0]["paperEq"], "rel");
        assert_eq!(v["summary"]["info"], "1");
        r.check("c", "rel", false, "1/2");
        assert!(!r.ok());
        assert_eq!(r.to_json()["status"], "fail");
    }

    #[test]
    fn cme_report_for_su2() {
        let r = verify_cme(&ModelConfig::new(ModelKind::Cs3, builtin("su2").unwrap())).unwrap();
        assert!(r.ok(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.find("cme[N]").unwrap().residual, "0");
        assert_eq!(r.to_pretty(), verify_cme(&ModelConfig::new(ModelKind::Cs3, builtin("su2").unwrap())).unwrap().to_pretty());
    }

    #[test]
    fn wilson_line_single_term() {
        let mut cfg = ModelConfig::new(ModelKind::Cs1, builtin("su2").unwrap());
        cfg.lines = 1;
        let r = verify_cme(&cfg).unwrap();
        let c = r.find("cme-single-term[Γ]").unwrap();
        assert_eq!(c.status, Status::Pass);
        assert!(c.residual.starts_with("-1·("), "{}", c.residual);
        assert!(r.ok());
        cfg.lines = 2;
        assert!(cfg.build().is_err());
    }

    #[test]
    fn vectors_and_algebras() {
        assert_eq!(parse_vector("0, 1/2,-3").unwrap(), vec![int(0), rat(1, 2), int(-3)]);
        assert!(parse_vector("1,x").is_err());
        assert_eq!(load_algebra("so3").unwrap().dim(), 3);
        assert!(load_algebra("missing.json").is_err());
    }

    #[test]
    fn dirac_report_literal_only_at_unit_hbar() {
        let su2 = builtin("su2").unwrap();
        let r = dirac(&DiracConfig::new(su2.clone(), "1", int(1))).unwrap();
        assert!(r.ok());
        assert_eq!(r.find("square-literal").unwrap().status, Status::Pass);
        let r = dirac(&DiracConfig::new(su2.clone(), "1", int(2))).unwrap();
        assert!(r.ok());
        assert_eq!(r.find("square-literal").unwrap().status, Status::Info);
        let mut f = DiracConfig::new(su2, "0.5", int(1));
        f.tolerance = Some(1e-12);
        assert!(dirac(&f).unwrap().ok());
    }
}
