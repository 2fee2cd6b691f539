//! Random-input checks shared by the property tests and the acceptance run.

#![allow(dead_code)]

use bvbfv::grassmann::{Alphabet, Bank, Gen, GenInfo, Grade, GradedPoly, Pairing, Role};
use bvbfv::scalar::int;
use bvbfv::variational::{is_exact, normal_form, BVModel};

pub struct Bracketed {
    pub gens: Vec<Gen>,
    pub pairing: Pairing,
}

/// Generators `(name, form, ghost, delta)` and the index pairs that are
/// canonically conjugate.
fn bracketed(parity: Grade, gens: &[(&str, i32, i32, i32)], pairs: &[(usize, usize)]) -> Bracketed {
    let mut al = Alphabet::new();
    let gens: Vec<Gen> = gens.iter().map(|(n, f, g, d)| al.add(Bank::Field, GenInfo::new(n, *f, *g, *d, Role::Field)).unwrap()).collect();
    let entries = pairs.iter().map(|&(a, b)| (gens[a], gens[b], int(1))).collect();
    Bracketed { pairing: Pairing::new(parity, entries).unwrap(), gens }
}

/// Odd antibracket over generators of every bidegree, plus a spectator.
pub fn odd() -> Bracketed {
    bracketed(
        Grade::new(1, 0),
        &[("x", 0, 0, 0), ("x⁺", 0, 1, 0), ("y", 0, 1, 0), ("y⁺", 0, 0, 0), ("u", 0, 0, 1), ("u⁺", 0, 1, 1), ("e", 1, 0, 0)],
        &[(0, 1), (2, 3), (4, 5)],
    )
}

/// Even Poisson bracket with pairs in three bidegrees.
pub fn even() -> Bracketed {
    bracketed(
        Grade::EVEN,
        &[("p", 0, 0, 0), ("q", 0, 0, 0), ("c", 1, 0, 0), ("b", 0, 1, 0), ("v", 0, 0, 1), ("w", 0, 0, 1), ("t", 1, 1, 1)],
        &[(0, 1), (2, 3), (4, 5)],
    )
}

pub const LETTERS: usize = 7;

/// Words over the generators with integer coefficients.
pub type Raw = Vec<(Vec<usize>, i64)>;

/// The component of the sum in the grade of its first surviving term.
pub fn homogeneous(b: &Bracketed, r: &Raw) -> GradedPoly {
    let mut p = GradedPoly::zero();
    for (w, c) in r {
        let word: Vec<Gen> = w.iter().map(|&i| b.gens[i]).collect();
        p = &p + &GradedPoly::word(&word, int(*c));
    }
    match p.grades().first() {
        Some(&g) => p.component(g),
        None => p,
    }
}

fn grade(p: &GradedPoly) -> Grade {
    p.grade().unwrap_or(Grade::EVEN)
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

fn expect_zero(what: &str, p: GradedPoly) -> Result<(), String> {
    if p.is_zero() {
        Ok(())
    } else {
        Err(format!("{what}: {p:?}"))
    }
}

/// Graded antisymmetry, both Leibniz rules and graded Jacobi on one triple.
pub fn axioms(b: &Bracketed, f: &GradedPoly, g: &GradedPoly, h: &GradedPoly) -> Result<(), String> {
    let e = b.pairing.parity;
    let br = |x: &GradedPoly, y: &GradedPoly| b.pairing.bracket(x, y);
    let (gg, hh) = (grade(g), grade(h));
    let (fs, gs, hs) = (grade(f).plus(e), gg.plus(e), hh.plus(e));

    expect_zero("antisymmetry", &br(f, g) + &br(g, f).scale(&int(sign(fs.odd_with(gs)))))?;
    expect_zero(
        "Leibniz in the second slot",
        &br(f, &g.mul_poly(h)) - &(&br(f, g).mul_poly(h) + &g.mul_poly(&br(f, h)).scale(&int(sign(fs.odd_with(gg))))),
    )?;
    expect_zero(
        "Leibniz in the first slot",
        &br(&f.mul_poly(g), h) - &(&f.mul_poly(&br(g, h)) + &br(f, h).mul_poly(g).scale(&int(sign(gg.odd_with(hs))))),
    )?;
    expect_zero("Jacobi", &br(f, &br(g, h)) - &(&br(&br(f, g), h) + &br(g, &br(f, h)).scale(&int(sign(fs.odd_with(gs))))))
}

/// Letters for random integrands: the fields `A`, `γ` and their d-images.
pub fn letters(m: &BVModel) -> Vec<GradedPoly> {
    let mut out = Vec::new();
    for name in ["A", "γ"] {
        let f = m.field(name).unwrap();
        out.extend(f.x());
        out.extend(f.dx());
    }
    out
}

/// The top-form part `p` of the words is reduced; the normal form must be
/// idempotent, differ from `p` by an exact term and ignore added `d(q)`
/// where `q` is the 2-form part.
pub fn normal_form_laws(m: &BVModel, words: &Raw) -> Result<(), String> {
    let c = &m.calc;
    let letters = letters(m);
    let mut p = GradedPoly::zero();
    let mut q = GradedPoly::zero();
    for (w, k) in words {
        let mono = w.iter().fold(GradedPoly::one(), |acc, &i| acc.mul_poly(&letters[i % letters.len()]));
        p = &p + &mono.filter(|mm| c.form_degree(mm) == 3).scale(&int(*k));
        q = &q + &mono.filter(|mm| c.form_degree(mm) == 2).scale(&int(*k));
    }
    let nf = normal_form(c, &p);
    if normal_form(c, &nf) != nf {
        return Err(format!("not idempotent on {}", c.fmt(&p)));
    }
    if !is_exact(c, &(&p - &nf)) {
        return Err(format!("p − nf(p) not exact for {}", c.fmt(&p)));
    }
    if normal_form(c, &(&p + &c.d(&q))) != nf {
        return Err(format!("depends on the exact part for {}", c.fmt(&p)));
    }
    Ok(())
}
