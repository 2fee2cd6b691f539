//! Normal forms modulo exact integrands.
//!
//! `p` is reduced against the span of `d(m)` over all monomials `m` whose
//! image can interact with `p`. Those are found by a breadth-first search:
//! a monomial `w` is hit by `d((w/μ)·y)` whenever `μ` is a monomial of
//! `d(y)` dividing `w`. The span is put in echelon form by leading monomial
//! and `p` is reduced against it; the remainder does not depend on the
//! order in which images are inserted.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_traits::Zero;

use crate::grassmann::{Gen, GradedPoly, Monomial};
use crate::scalar::Rational;

use super::Calculus;

/// Upper bound on the number of preimage monomials explored.
const MAX_PREIMAGES: usize = 200_000;

struct Row {
    poly: BTreeMap<Monomial, Rational>,
    /// Combination of preimage monomials producing `poly` under `d`.
    tag: BTreeMap<usize, Rational>,
}

fn axpy<K: Ord + Clone>(dst: &mut BTreeMap<K, Rational>, src: &BTreeMap<K, Rational>, c: &Rational) {
    for (k, v) in src {
        let e = dst.entry(k.clone()).or_insert_with(Rational::zero);
        *e += c * v;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

fn divide(w: &Monomial, mu: &Monomial) -> Option<Monomial> {
    let mut out = Vec::new();
    for &(g, e) in w.factors() {
        let k = mu.exponent(g);
        if k > e {
            return None;
        }
        for _ in 0..e - k {
            out.push(g);
        }
    }
    if mu.factors().iter().any(|(g, e)| w.exponent(*g) < *e) {
        return None;
    }
    Monomial::from_word(&out).map(|(_, m)| m)
}

/// Reduces `p` modulo exact integrands. Returns `(nf, ρ)` with
/// `p = nf + d(ρ)`; `nf = 0` iff `p` is exact.
pub fn reduce(calc: &Calculus, p: &GradedPoly) -> (GradedPoly, GradedPoly) {
    let p = calc.truncate(p);
    // generators with nonzero d-image, grouped by stratum
    let mut by_stratum: HashMap<&str, Vec<(Gen, Vec<Monomial>)>> = HashMap::new();
    for (g, info) in calc.alpha.gens() {
        if let Some(img) = calc.d_image(g) {
            if !img.is_zero() {
                by_stratum.entry(info.stratum.as_str()).or_default().push((g, img.terms().map(|(m, _)| m.clone()).collect()));
            }
        }
    }

    let mut pre: Vec<Monomial> = Vec::new();
    let mut pre_seen: HashSet<Monomial> = HashSet::new();
    let mut img_seen: HashSet<Monomial> = HashSet::new();
    let mut queue: VecDeque<Monomial> = VecDeque::new();
    let mut rows_in: Vec<GradedPoly> = Vec::new();
    for (m, _) in p.terms() {
        if img_seen.insert(m.clone()) {
            queue.push_back(m.clone());
        }
    }
    while let Some(w) = queue.pop_front() {
        let Some((g0, _)) = w.factors().first() else { continue };
        let Some(gens) = by_stratum.get(calc.stratum_of(*g0)) else { continue };
        for (y, mus) in gens {
            for mu in mus {
                let Some(q) = divide(&w, mu) else { continue };
                let Some((_, cand)) = q.mul(&Monomial::gen(*y)) else { continue };
                if calc.form_degree(&cand) > calc.dim(calc.stratum_of(*y)) as i32 {
                    continue;
                }
                if !pre_seen.insert(cand.clone()) {
                    continue;
                }
                let dimg = calc.d(&GradedPoly::term(cand.clone(), Rational::from_integer(1.into())));
                for (m, _) in dimg.terms() {
                    if img_seen.insert(m.clone()) {
                        queue.push_back(m.clone());
                    }
                }
                pre.push(cand);
                rows_in.push(dimg);
                if pre.len() > MAX_PREIMAGES {
                    panic!("exactness search exceeded {MAX_PREIMAGES} monomials");
                }
            }
        }
    }

    // echelon form keyed by leading (largest) monomial
    let mut pivots: BTreeMap<Monomial, Row> = BTreeMap::new();
    for (i, img) in rows_in.into_iter().enumerate() {
        let mut row = Row {
            poly: img.terms().map(|(m, c)| (m.clone(), c.clone())).collect(),
            tag: [(i, Rational::from_integer(1.into()))].into_iter().collect(),
        };
        reduce_row(&mut row, &pivots);
        if let Some((lead, lc)) = row.poly.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let inv = lc.recip();
            row.poly.values_mut().for_each(|v| *v *= &inv);
            row.tag.values_mut().for_each(|v| *v *= &inv);
            pivots.insert(lead, row);
        }
    }

    let mut target = Row { poly: p.terms().map(|(m, c)| (m.clone(), c.clone())).collect(), tag: BTreeMap::new() };
    reduce_row(&mut target, &pivots);
    let mut nf = GradedPoly::zero();
    for (m, c) in target.poly {
        nf.add_term(m, c);
    }
    // target = p + Σ tag·d(pre)  ⇒  p = nf − d(Σ tag·pre)
    let mut rho = GradedPoly::zero();
    for (i, c) in target.tag {
        rho.add_term(pre[i].clone(), -c);
    }
    (nf, rho)
}

/// Eliminates every pivot monomial present in `row`, largest first.
fn reduce_row(row: &mut Row, pivots: &BTreeMap<Monomial, Row>) {
    let mut bound: Option<Monomial> = None;
    loop {
        let next = row
            .poly
            .iter()
            .rev()
            .filter(|(m, _)| bound.as_ref().is_none_or(|b| *m < b))
            .find(|(m, _)| pivots.contains_key(*m))
            .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = next else { break };
        let piv = &pivots[&m];
        let f = -c;
        axpy(&mut row.poly, &piv.poly, &f);
        axpy(&mut row.tag, &piv.tag, &f);
        bound = Some(m);
    }
}

/// Canonical representative of `p` modulo exact integrands.
pub fn normal_form(calc: &Calculus, p: &GradedPoly) -> GradedPoly {
    reduce(calc, p).0
}

pub fn is_exact(calc: &Calculus, p: &GradedPoly) -> bool {
    normal_form(calc, p).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::builtin;
    use crate::variational::build_cs3;

    #[test]
    fn exact_terms_vanish_and_preimage_is_consistent() {
        let m = build_cs3(&builtin("su2").unwrap()).unwrap();
        let c = &m.calc;
        let x = c.parse("A_0 A_1 dγ_2 + γ_0 γ_1 A⁺_2").unwrap();
        let dx = c.d(&x);
        assert!(!dx.is_zero());
        assert!(is_exact(c, &dx));
        let y = c.parse("A_0 dA_1").unwrap();
        let (nf, rho) = reduce(c, &(&dx + &y));
        assert_eq!(&nf + &c.d(&rho), &dx + &y);
        assert!(!nf.is_zero());
        // the normal form only depends on the class
        let nf2 = normal_form(c, &y);
        assert_eq!(nf, nf2);
    }

    #[test]
    fn chern_simons_terms_are_not_exact() {
        let m = build_cs3(&builtin("su2").unwrap()).unwrap();
        assert!(!is_exact(&m.calc, &m.action["N"]));
    }
}
