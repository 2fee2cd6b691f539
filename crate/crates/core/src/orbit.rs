//! Floating-point checks of coadjoint-orbit geometry and Wilson holonomies.
//!
//! Group elements enter only through `Ad_g = exp(ad_x)`, computed with the
//! Padé scaling-and-squaring exponential. Sampling uses ChaCha20 seeded from
//! the user seed, one stream per sample, so results do not depend on the
//! order in which samples are evaluated.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::lie::{LieAlgebra, Representation};
use crate::scalar::to_f64;
use crate::variational::OrbitSpec;
use crate::{Error, Result};

pub type C64 = Complex<f64>;

/// Matrix of `ad_x` acting on column vectors: `(ad_x)_{cb} = Σ_a x_a f_abc`.
pub fn ad_matrix(l: &LieAlgebra, x: &[f64]) -> DMatrix<f64> {
    let n = l.dim();
    let mut m = DMatrix::zeros(n, n);
    for (a, b, c, f) in l.nonzero() {
        m[(c, b)] += x[a] * to_f64(&f);
    }
    m
}

/// `Ad_{exp x}`.
pub fn ad_exp(l: &LieAlgebra, x: &[f64]) -> DMatrix<f64> {
    ad_matrix(l, x).exp()
}

fn t0(spec: &OrbitSpec) -> DVector<f64> {
    DVector::from_iterator(spec.t0.len(), spec.t0.iter().map(to_f64))
}

fn dot(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.dot(b)
}

#[derive(Clone, Debug)]
pub struct OrbitPoint {
    /// `Ad_g` for `g = exp x`.
    pub ad: DMatrix<f64>,
    /// `H = Ad_g T0`.
    pub h: DVector<f64>,
}

impl OrbitPoint {
    /// `|(H,H) − (T0,T0)|` relative to `(T0,T0)` (absolute when `T0 = 0`).
    pub fn norm_error(&self, spec: &OrbitSpec) -> f64 {
        let t = t0(spec);
        let n0 = dot(&t, &t);
        let err = (dot(&self.h, &self.h) - n0).abs();
        if n0 > 0.0 {
            err / n0
        } else {
            err
        }
    }
}

pub fn orbit_point(spec: &OrbitSpec, x: &[f64]) -> OrbitPoint {
    let ad = ad_exp(&spec.algebra, x);
    let h = &ad * t0(spec);
    OrbitPoint { ad, h }
}

fn sample_rng(seed: u64, k: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(k);
    r
}

fn uniform_vec(r: &mut ChaCha20Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-scale..scale)).collect()
}

#[derive(Clone, Debug)]
pub struct KirillovReport {
    pub samples: usize,
    pub step: f64,
    /// `max |dα_G(x̃,ỹ) − ω_G(x̃,ỹ)|` over samples.
    pub max_err: f64,
    /// `max |ω_G(x,y) + ω_G(y,x)|`.
    pub max_antisymmetry: f64,
    /// `max |(H,H) − (T0,T0)|/(T0,T0)` over the sampled points.
    pub max_norm_err: f64,
}

/// `ω_G(x̃,ỹ) = −(H, [x,y])` on right-invariant fields at `g`.
pub fn omega_g(l: &LieAlgebra, h: &DVector<f64>, x: &[f64], y: &[f64]) -> f64 {
    let b = DVector::from_vec(l.bracket_f64(x, y));
    -dot(h, &b)
}

/// `α_G = (T0, g⁻¹δg) = (H, δg g⁻¹)` evaluated on the tangent vector
/// `v g` at `g`.
fn alpha_g(ad_g: &DMatrix<f64>, t: &DVector<f64>, v: &DVector<f64>) -> f64 {
    dot(&(ad_g * t), v)
}

/// Exterior derivative of `α_G` at `g` on the pair `(x g, y g)` by central
/// differences in the chart `(s, t) ↦ exp(s x) exp(t y) g`.
pub fn d_alpha_fd(l: &LieAlgebra, spec: &OrbitSpec, ad_g: &DMatrix<f64>, x: &[f64], y: &[f64], step: f64) -> f64 {
    let t = t0(spec);
    let xv = DVector::from_column_slice(x);
    let yv = DVector::from_column_slice(y);
    let at = |s: f64, tt: f64| -> DMatrix<f64> {
        let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
        let ty: Vec<f64> = y.iter().map(|v| v * tt).collect();
        ad_exp(l, &sx) * ad_exp(l, &ty) * ad_g
    };
    // ∂_t g · g⁻¹ = Ad_{exp(s x)} y and ∂_s g · g⁻¹ = x in this chart
    let a_t = |s: f64, tt: f64| {
        let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
        alpha_g(&at(s, tt), &t, &(ad_exp(l, &sx) * &yv))
    };
    let a_s = |s: f64, tt: f64| alpha_g(&at(s, tt), &t, &xv);
    let ds_at = (a_t(step, 0.0) - a_t(-step, 0.0)) / (2.0 * step);
    let dt_as = (a_s(0.0, step) - a_s(0.0, -step)) / (2.0 * step);
    ds_at - dt_as
}

/// Compares the finite-difference `dα_G` with `ω_G` at seeded samples.
pub fn kirillov_pullback_check(spec: &OrbitSpec, samples: usize, seed: u64, step: f64) -> Result<KirillovReport> {
    if samples == 0 {
        return Err(Error::Config("samples must be at least 1".into()));
    }
    if step <= 0.0 {
        return Err(Error::Config("finite-difference step must be positive".into()));
    }
    let l = &spec.algebra;
    let n = l.dim();
    let mut max_err = 0.0f64;
    let mut max_anti = 0.0f64;
    let mut max_norm = 0.0f64;
    for k in 0..samples {
        let mut r = sample_rng(seed, k as u64);
        let g = uniform_vec(&mut r, n, std::f64::consts::PI);
        let x = uniform_vec(&mut r, n, 1.0);
        let y = uniform_vec(&mut r, n, 1.0);
        let p = orbit_point(spec, &g);
        let w = omega_g(l, &p.h, &x, &y);
        let fd = d_alpha_fd(l, spec, &p.ad, &x, &y, step);
        max_err = max_err.max((fd - w).abs());
        max_anti = max_anti.max((w + omega_g(l, &p.h, &y, &x)).abs());
        max_norm = max_norm.max(p.norm_error(spec));
    }
    Ok(KirillovReport { samples, step, max_err, max_antisymmetry: max_anti, max_norm_err: max_norm })
}

#[derive(Clone, Debug)]
pub struct RichardsonReport {
    pub coarse: KirillovReport,
    pub fine: KirillovReport,
    /// `coarse.max_err / fine.max_err`; about 4 while truncation dominates.
    pub ratio: f64,
}

/// Two-step consistency: the same samples at `step` and `step / 2`.
pub fn kirillov_richardson(spec: &OrbitSpec, samples: usize, seed: u64, step: f64) -> Result<RichardsonReport> {
    let coarse = kirillov_pullback_check(spec, samples, seed, step)?;
    let fine = kirillov_pullback_check(spec, samples, seed, step / 2.0)?;
    let ratio = if fine.max_err > 0.0 {
        coarse.max_err / fine.max_err
    } else if coarse.max_err == 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(RichardsonReport { coarse, fine, ratio })
}

#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub samples: usize,
    pub max_err: f64,
}

/// `max |B(H, [x, H])|` for random `g` and `x`; `B` defaults to the
/// invariant form (the identity in an orthonormal basis).
pub fn tangent_orthogonality(spec: &OrbitSpec, samples: usize, seed: u64, form: Option<&DMatrix<f64>>) -> Result<OrthogonalityReport> {
    let l = &spec.algebra;
    let n = l.dim();
    if let Some(b) = form {
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::Dimension(format!("bilinear form must be {n}×{n}")));
        }
    }
    let mut max_err = 0.0f64;
    for k in 0..samples {
        let mut r = sample_rng(seed, k as u64);
        let g = uniform_vec(&mut r, n, std::f64::consts::PI);
        let x = uniform_vec(&mut r, n, 1.0);
        let h = orbit_point(spec, &g).h;
        let xh = DVector::from_vec(l.bracket_f64(&x, h.as_slice()));
        let v = match form {
            Some(b) => h.dot(&(b * &xh)),
            None => h.dot(&xh),
        };
        max_err = max_err.max(v.abs());
    }
    Ok(OrthogonalityReport { samples, max_err })
}

/// `exp(Σ_a v_a rho_a)` in the representation.
pub fn rep_exp(r: &Representation, v: &[f64]) -> Result<DMatrix<C64>> {
    if v.len() != r.rho.len() {
        return Err(Error::Dimension(format!("connection vector of length {} for an algebra of dimension {}", v.len(), r.rho.len())));
    }
    let mut m = DMatrix::<C64>::zeros(r.dim_v, r.dim_v);
    for (a, va) in v.iter().enumerate() {
        m += r.rho[a].to_c64() * C64::new(*va, 0.0);
    }
    Ok(m.exp())
}

#[derive(Clone, Debug)]
pub enum Holonomy {
    Trace(C64),
    Matrix(DMatrix<C64>),
}

/// Ordered product of link matrices.
pub fn link_product(links: &[DMatrix<C64>]) -> Result<DMatrix<C64>> {
    let first = links.first().ok_or_else(|| Error::Config("empty segment list".into()))?;
    let mut u = DMatrix::<C64>::identity(first.nrows(), first.ncols());
    for l in links {
        if l.nrows() != u.ncols() {
            return Err(Error::Dimension("link matrices of different sizes".into()));
        }
        u *= l;
    }
    Ok(u)
}

/// Links `exp(A_i)` of a discretised connection.
pub fn links(r: &Representation, a: &[Vec<f64>]) -> Result<Vec<DMatrix<C64>>> {
    a.iter().map(|v| rep_exp(r, v)).collect()
}

/// `Pexp ∫ A` as the ordered product `exp(A_1) exp(A_2) …`, traced iff closed.
pub fn wilson_holonomy(r: &Representation, a: &[Vec<f64>], closed: bool) -> Result<Holonomy> {
    let u = link_product(&links(r, a)?)?;
    Ok(if closed { Holonomy::Trace(u.trace()) } else { Holonomy::Matrix(u) })
}

/// `U_i ↦ g_i U_i g_{i+1}⁻¹` with `g_n = g_0` on a closed loop.
pub fn gauge_transform(links: &[DMatrix<C64>], g: &[DMatrix<C64>]) -> Result<Vec<DMatrix<C64>>> {
    if g.len() != links.len() {
        return Err(Error::Dimension("one gauge matrix per lattice site".into()));
    }
    let n = links.len();
    links
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let inv = g[(i + 1) % n].clone().try_inverse().ok_or_else(|| Error::Precondition("singular gauge matrix".into()))?;
            Ok(&g[i] * u * inv)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct HolonomyReport {
    pub configs: usize,
    pub max_gauge_err: f64,
    pub max_cyclic_err: f64,
}

/// Closed-loop trace under random lattice gauge transformations and cyclic
/// relabelling of the links.
pub fn holonomy_invariance(r: &Representation, configs: usize, segments: usize, seed: u64) -> Result<HolonomyReport> {
    let n = r.rho.len();
    let mut max_gauge = 0.0f64;
    let mut max_cyclic = 0.0f64;
    for k in 0..configs {
        let mut rng = sample_rng(seed, k as u64);
        let a: Vec<Vec<f64>> = (0..segments).map(|_| uniform_vec(&mut rng, n, 1.0)).collect();
        let g: Vec<DMatrix<C64>> =
            (0..segments).map(|_| rep_exp(r, &uniform_vec(&mut rng, n, std::f64::consts::PI))).collect::<Result<_>>()?;
        let ls = links(r, &a)?;
        let w = link_product(&ls)?.trace();
        let wg = link_product(&gauge_transform(&ls, &g)?)?.trace();
        max_gauge = max_gauge.max((w - wg).norm());
        let shift = rng.gen_range(0..segments);
        let mut rot = ls.clone();
        rot.rotate_left(shift);
        max_cyclic = max_cyclic.max((w - link_product(&rot)?.trace()).norm());
    }
    Ok(HolonomyReport { configs, max_gauge_err: max_gauge, max_cyclic_err: max_cyclic })
}

/// Parses a connection given as a JSON list of vectors.
pub fn parse_connection(text: &str) -> Result<Vec<Vec<f64>>> {
    let v: Vec<Vec<f64>> = serde_json::from_str(text)?;
    if v.is_empty() {
        return Err(Error::Config("connection has no segments".into()));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin, rep_su2};
    use crate::scalar::int;

    fn su2_orbit(t: [i64; 3]) -> OrbitSpec {
        OrbitSpec::new(&builtin("su2").unwrap(), t.iter().map(|v| int(*v)).collect(), "j").unwrap()
    }

    #[test]
    fn identity_element_fixes_t0() {
        let s = su2_orbit([0, 0, 1]);
        let p = orbit_point(&s, &[0.0, 0.0, 0.0]);
        assert_eq!(p.h.as_slice(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn adjoint_action_is_a_rotation() {
        // for f = ε, Ad_{exp x} rotates by |x| about x (right-handed)
        let s = su2_orbit([0, 0, 1]);
        let th = std::f64::consts::FRAC_PI_2;
        let h = orbit_point(&s, &[th, 0.0, 0.0]).h;
        let want = [0.0, -th.sin(), th.cos()];
        for i in 0..3 {
            assert!((h[i] - want[i]).abs() < 1e-13, "{h:?}");
        }
        assert!((h.norm_squared() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn abelian_orbits_are_points() {
        let l = builtin("abelian(2)").unwrap();
        let s = OrbitSpec::new(&l, vec![int(1), int(-2)], "q").unwrap();
        let h = orbit_point(&s, &[0.7, -3.0]).h;
        assert_eq!(h.as_slice(), &[1.0, -2.0]);
        let k = kirillov_pullback_check(&s, 5, 1, 1e-5).unwrap();
        assert_eq!(k.max_err, 0.0);
        assert_eq!(tangent_orthogonality(&s, 5, 1, None).unwrap().max_err, 0.0);
    }

    #[test]
    fn kirillov_form_matches_potential() {
        let s = su2_orbit([0, 0, 1]);
        let k = kirillov_pullback_check(&s, 100, 42, 1e-5).unwrap();
        assert!(k.max_err <= 1e-6, "{}", k.max_err);
        assert_eq!(k.max_antisymmetry, 0.0);
        assert!(k.max_norm_err <= 1e-9);
    }

    #[test]
    fn central_differences_converge_quadratically() {
        let s = su2_orbit([0, 0, 1]);
        let r = kirillov_richardson(&s, 100, 42, 1e-2).unwrap();
        assert!((r.ratio - 4.0).abs() < 0.2, "{}", r.ratio);
    }

    #[test]
    fn non_invariant_form_breaks_orthogonality() {
        let s = su2_orbit([1, 0, 0]);
        assert!(tangent_orthogonality(&s, 50, 7, None).unwrap().max_err <= 1e-12);
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert!(tangent_orthogonality(&s, 50, 7, Some(&b)).unwrap().max_err > 1e-3);
    }

    #[test]
    fn pauli_exponential() {
        let r = rep_su2(1, int(1));
        // A·rho = iπ σ_3 / 1 when A = (0, 0, −2π)
        let Holonomy::Matrix(u) = wilson_holonomy(&r, &[vec![0.0, 0.0, -2.0 * std::f64::consts::PI]], false).unwrap() else { panic!() };
        let id = DMatrix::<C64>::identity(2, 2);
        assert!((u + id).iter().all(|z| z.norm() < 1e-12));
        // exp(θ n·rho) = cos(θ/2) − i sin(θ/2) n·σ for unit n
        let th = 1.3f64;
        let n = [0.6, 0.0, 0.8];
        let Holonomy::Matrix(u) = wilson_holonomy(&r, &[n.iter().map(|v| v * th).collect()], false).unwrap() else { panic!() };
        let (c, sn) = ((th / 2.0).cos(), (th / 2.0).sin());
        let i = C64::new(0.0, 1.0);
        let want = [[c - i * sn * n[2], -i * sn * n[0]], [-i * sn * n[0], c + i * sn * n[2]]];
        for a in 0..2 {
            for b in 0..2 {
                assert!((u[(a, b)] - want[a][b]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trivial_connection_traces_to_dimension() {
        let r = rep_su2(2, int(1));
        let Holonomy::Trace(t) = wilson_holonomy(&r, &vec![vec![0.0; 3]; 4], true).unwrap() else { panic!() };
        assert_eq!(t, C64::new(3.0, 0.0));
        assert!(wilson_holonomy(&r, &[], true).is_err());
        assert!(wilson_holonomy(&r, &[vec![0.0; 2]], true).is_err());
    }

    #[test]
    fn closed_trace_is_gauge_and_cyclic_invariant() {
        let r = rep_su2(1, int(1));
        let h = holonomy_invariance(&r, 50, 6, 9).unwrap();
        assert!(h.max_gauge_err <= 1e-10 && h.max_cyclic_err <= 1e-10, "{h:?}");
    }
}
