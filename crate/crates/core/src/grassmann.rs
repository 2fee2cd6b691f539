//! Free bigraded-commutative polynomial algebras with exact coefficients.
//!
//! Every generator carries a bidegree `(p, q) ∈ Z2 × Z2`: `p` is the parity
//! of form degree plus ghost number, `q` the parity of the field-space form
//! degree. Swapping two factors costs `(-1)^{p p' + q q'}`, so a generator
//! with `p != q` squares to zero and one with `p == q` is polynomial. The
//! differentials `d` and `δ` have bidegrees `(1,0)` and `(0,1)` and commute.
//!
//! Monomials are kept sorted by generator id and every product is
//! normalised immediately.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::scalar::{int, parse_rational, Rational};
use crate::{Error, Result};

/// Bidegree modulo 2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    pub p: u8,
    pub q: u8,
}

impl Grade {
    pub const EVEN: Grade = Grade { p: 0, q: 0 };

    pub fn new(p: i64, q: i64) -> Grade {
        Grade { p: p.rem_euclid(2) as u8, q: q.rem_euclid(2) as u8 }
    }

    /// True when swapping objects of these grades costs a sign.
    #[inline]
    pub fn odd_with(self, o: Grade) -> bool {
        ((self.p & o.p) ^ (self.q & o.q)) == 1
    }

    #[inline]
    pub fn plus(self, o: Grade) -> Grade {
        Grade { p: self.p ^ o.p, q: self.q ^ o.q }
    }

    #[inline]
    pub fn times(self, e: u32) -> Grade {
        if e.is_multiple_of(2) {
            Grade::EVEN
        } else {
            self
        }
    }

    pub fn is_nilpotent(self) -> bool {
        self.p != self.q
    }
}

/// Generator handle. Ordering by id is the monomial order; the two low
/// bits cache the grade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(u32);

impl Gen {
    #[inline]
    pub fn grade(self) -> Grade {
        Grade { p: ((self.0 >> 1) & 1) as u8, q: (self.0 & 1) as u8 }
    }

    pub fn id(self) -> u32 {
        self.0
    }
}

/// Id ranges. Field-space one-forms sort first and auxiliary placeholders
/// last, so `δφ · (…) · U` is already canonical.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bank {
    Delta = 0,
    Field = 1,
    Aux = 2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Field,
    DImage,
    DeltaImage,
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenInfo {
    pub name: String,
    pub form: i32,
    pub ghost: i32,
    pub delta: i32,
    pub lie: Option<usize>,
    pub role: Role,
    pub d_partner: Option<Gen>,
    pub delta_partner: Option<Gen>,
    /// Stratum the generator lives on (`N`, `Γ1`, `z1`, …).
    pub stratum: String,
}

impl GenInfo {
    pub fn new(name: &str, form: i32, ghost: i32, delta: i32, role: Role) -> Self {
        GenInfo {
            name: name.to_string(),
            form,
            ghost,
            delta,
            lie: None,
            role,
            d_partner: None,
            delta_partner: None,
            stratum: String::new(),
        }
    }

    pub fn with_lie(mut self, a: usize) -> Self {
        self.lie = Some(a);
        self
    }

    pub fn on(mut self, stratum: &str) -> Self {
        self.stratum = stratum.to_string();
        self
    }

    pub fn grade(&self) -> Grade {
        Grade::new((self.form + self.ghost) as i64, self.delta as i64)
    }
}

/// Registry of generators and their metadata.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    infos: BTreeMap<Gen, GenInfo>,
    by_name: HashMap<String, Gen>,
    counters: [u32; 3],
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, bank: Bank, info: GenInfo) -> Result<Gen> {
        if self.by_name.contains_key(&info.name) {
            return Err(Error::Config(format!("duplicate generator `{}`", info.name)));
        }
        let n = self.counters[bank as usize];
        self.counters[bank as usize] += 1;
        let index = ((bank as u32) << 24) | n;
        let g = info.grade();
        let gen = Gen((index << 2) | ((g.p as u32) << 1) | g.q as u32);
        self.by_name.insert(info.name.clone(), gen);
        self.infos.insert(gen, info);
        Ok(gen)
    }

    pub fn info(&self, g: Gen) -> &GenInfo {
        &self.infos[&g]
    }

    pub fn info_mut(&mut self, g: Gen) -> &mut GenInfo {
        self.infos.get_mut(&g).expect("unknown generator")
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.infos[&g].name
    }

    pub fn lookup(&self, name: &str) -> Option<Gen> {
        self.by_name.get(name).copied()
    }

    pub fn gens(&self) -> impl Iterator<Item = (Gen, &GenInfo)> {
        self.infos.iter().map(|(g, i)| (*g, i))
    }

    pub fn len(&self) -> usize {
        self.infos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.infos.is_empty()
    }
}

type Factors = SmallVec<[(Gen, u32); 6]>;

/// Sorted list of `(generator, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Factors);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn gen(g: Gen) -> Self {
        let mut v = SmallVec::new();
        v.push((g, 1));
        Monomial(v)
    }

    pub fn factors(&self) -> &[(Gen, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn grade(&self) -> Grade {
        self.0.iter().fold(Grade::EVEN, |acc, (g, e)| acc.plus(g.grade().times(*e)))
    }

    pub fn exponent(&self, g: Gen) -> u32 {
        self.0.iter().find(|(h, _)| *h == g).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn contains(&self, g: Gen) -> bool {
        self.exponent(g) > 0
    }

    /// Expanded factor list, repeating generators by exponent.
    pub fn expanded(&self) -> Vec<Gen> {
        self.0.iter().flat_map(|(g, e)| std::iter::repeat_n(*g, *e as usize)).collect()
    }

    /// Product `self · other`; `None` when it vanishes, otherwise the sign
    /// (`true` = negative) and the canonical monomial.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        let a = &self.0;
        let mut suffix = self.grade();
        let mut out: Factors = SmallVec::with_capacity(a.len() + other.0.len());
        let mut neg = false;
        let mut i = 0;
        for &(y, ey) in other.0.iter() {
            while i < a.len() && a[i].0 < y {
                suffix = suffix.plus(a[i].0.grade().times(a[i].1));
                out.push(a[i]);
                i += 1;
            }
            let mut e = ey;
            if i < a.len() && a[i].0 == y {
                if y.grade().is_nilpotent() {
                    return None;
                }
                e += a[i].1;
                suffix = suffix.plus(y.grade().times(a[i].1));
                i += 1;
            }
            if ey % 2 == 1 && y.grade().odd_with(suffix) {
                neg = !neg;
            }
            out.push((y, e));
        }
        out.extend_from_slice(&a[i..]);
        Some((neg, Monomial(out)))
    }

    /// Sorts an arbitrary word of generators into canonical form.
    pub fn from_word(word: &[Gen]) -> Option<(bool, Monomial)> {
        let mut acc = Monomial::one();
        let mut neg = false;
        for &g in word {
            let (s, m) = acc.mul(&Monomial::gen(g))?;
            neg ^= s;
            acc = m;
        }
        Some((neg, acc))
    }

    fn with_exponent(&self, idx: usize, e: u32) -> Monomial {
        let mut f = self.0.clone();
        if e == 0 {
            f.remove(idx);
        } else {
            f[idx].1 = e;
        }
        Monomial(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Polynomial with exact rational coefficients in canonical form.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedPoly[")?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}·{:?}", m.0.iter().map(|(g, e)| (g.0, *e)).collect::<Vec<_>>())?;
        }
        write!(f, "]")
    }
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(Monomial::gen(g), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    /// `c · g1 g2 … gn` for a word in any order.
    pub fn word(word: &[Gen], c: Rational) -> Self {
        match Monomial::from_word(word) {
            Some((neg, m)) => Self::term(m, if neg { -c } else { c }),
            None => Self::zero(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GradedPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `k` with `self = k·q`, if any.
    pub fn multiple_of(&self, q: &GradedPoly) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let (m, c) = q.terms().next()?;
        let k = self.coeff(m) / c;
        (q.scale(&k) == *self).then_some(k)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> GradedPoly {
        if c.is_zero() {
            return GradedPoly::zero();
        }
        GradedPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_poly(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// Set of grades present.
    pub fn grades(&self) -> Vec<Grade> {
        let mut g: Vec<Grade> = self.terms.keys().map(Monomial::grade).collect();
        g.sort();
        g.dedup();
        g
    }

    /// The grade if homogeneous (zero counts as even).
    pub fn grade(&self) -> Option<Grade> {
        match self.grades().as_slice() {
            [] => Some(Grade::EVEN),
            [g] => Some(*g),
            _ => None,
        }
    }

    pub fn component(&self, g: Grade) -> GradedPoly {
        GradedPoly { terms: self.terms.iter().filter(|(m, _)| m.grade() == g).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> GradedPoly {
        GradedPoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn contains_gen(&self, g: Gen) -> bool {
        self.terms.keys().any(|m| m.contains(g))
    }

    pub fn gens(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.terms.keys().flat_map(|m| m.0.iter().map(|(g, _)| *g)).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Graded partial derivative from the given side.
    pub fn derive(&self, g: Gen, side: Side) -> GradedPoly {
        let mut out = GradedPoly::zero();
        let gg = g.grade();
        for (m, c) in &self.terms {
            let Some(idx) = m.0.iter().position(|(h, _)| *h == g) else { continue };
            let e = m.0[idx].1;
            let passed = match side {
                Side::Left => m.0[..idx].iter().fold(Grade::EVEN, |a, (h, k)| a.plus(h.grade().times(*k))),
                Side::Right => m.0[idx + 1..].iter().fold(Grade::EVEN, |a, (h, k)| a.plus(h.grade().times(*k))),
            };
            let mut coef = c * int(e as i64);
            if gg.odd_with(passed) {
                coef = -coef;
            }
            out.add_term(m.with_exponent(idx, e - 1), coef);
        }
        out
    }

    /// Applies the derivation of grade `dg` determined by its values on
    /// generators; `image` returns `None` for generators it kills.
    pub fn apply_derivation(&self, dg: Grade, image: &dyn Fn(Gen) -> Option<GradedPoly>) -> GradedPoly {
        let mut cache: HashMap<Gen, Option<GradedPoly>> = HashMap::new();
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let word = m.expanded();
            let mut prefix_grade = Grade::EVEN;
            for k in 0..word.len() {
                let img = cache.entry(word[k]).or_insert_with(|| image(word[k]).filter(|p| !p.is_zero()));
                if let Some(img) = img {
                    let mut coef = c.clone();
                    if dg.odd_with(prefix_grade) {
                        coef = -coef;
                    }
                    let pre = GradedPoly::word(&word[..k], coef);
                    let post = GradedPoly::word(&word[k + 1..], Rational::one());
                    let t = pre.mul_poly(img).mul_poly(&post);
                    for (mm, cc) in t.terms {
                        out.add_term(mm, cc);
                    }
                }
                prefix_grade = prefix_grade.plus(word[k].grade());
            }
        }
        out
    }

    /// Algebra homomorphism sending each generator to a polynomial of the
    /// same grade (generators missing from `map` are kept).
    pub fn substitute(&self, map: &dyn Fn(Gen) -> Option<GradedPoly>) -> GradedPoly {
        let mut out = GradedPoly::zero();
        let mut cache: HashMap<Gen, GradedPoly> = HashMap::new();
        for (m, c) in &self.terms {
            let mut acc = GradedPoly::constant(c.clone());
            for g in m.expanded() {
                let img = cache.entry(g).or_insert_with(|| map(g).unwrap_or_else(|| GradedPoly::gen(g)));
                acc = acc.mul_poly(img);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        out
    }

    /// Deterministic text form: terms in monomial order, factors separated
    /// by spaces, `^e` for exponents above one.
    pub fn format(&self, alpha: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.is_one() {
                parts.push(a.to_string());
            }
            for (g, e) in m.0.iter() {
                if *e == 1 {
                    parts.push(alpha.name(*g).to_string());
                } else {
                    parts.push(format!("{}^{}", alpha.name(*g), e));
                }
            }
            s.push_str(&parts.join(" "));
        }
        s
    }

    /// Inverse of [`GradedPoly::format`]; factors may appear in any order.
    pub fn parse(text: &str, alpha: &Alphabet) -> Result<GradedPoly> {
        let mut out = GradedPoly::zero();
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        let mut sign = Rational::one();
        let mut coef: Option<Rational> = None;
        let mut word: Vec<Gen> = Vec::new();
        let mut started = false;
        let flush = |sign: &Rational, coef: &mut Option<Rational>, word: &mut Vec<Gen>, out: &mut GradedPoly| {
            let c = coef.take().unwrap_or_else(Rational::one) * sign;
            out.add_scaled(&GradedPoly::word(word, Rational::one()), &c);
            word.clear();
        };
        for tok in text.split_whitespace() {
            match tok {
                "+" | "-" => {
                    if started {
                        flush(&sign, &mut coef, &mut word, &mut out);
                    }
                    sign = if tok == "-" { -Rational::one() } else { Rational::one() };
                    started = false;
                }
                _ => {
                    let (tok, lead_neg) = match tok.strip_prefix('-') {
                        Some(rest) if !started => (rest, true),
                        _ => (tok, false),
                    };
                    if lead_neg {
                        sign = -sign;
                    }
                    started = true;
                    let first = tok.chars().next().unwrap_or(' ');
                    if first.is_ascii_digit() {
                        if coef.is_some() || !word.is_empty() {
                            return Err(Error::Config(format!("misplaced coefficient `{tok}`")));
                        }
                        coef = Some(parse_rational(tok).ok_or_else(|| Error::Config(format!("bad coefficient `{tok}`")))?);
                        continue;
                    }
                    let (name, e) = match tok.rsplit_once('^') {
                        Some((n, e)) => (n, e.parse::<u32>().map_err(|_| Error::Config(format!("bad exponent in `{tok}`")))?),
                        None => (tok, 1),
                    };
                    let g = alpha.lookup(name).ok_or_else(|| Error::Config(format!("unknown generator `{name}`")))?;
                    word.extend(std::iter::repeat_n(g, e as usize));
                }
            }
        }
        if started {
            flush(&sign, &mut coef, &mut word, &mut out);
        }
        Ok(out)
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, o: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out.add_scaled(o, &Rational::one());
        out
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, o: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        out.add_scaled(o, &-Rational::one());
        out
    }
}

impl Mul for &GradedPoly {
    type Output = GradedPoly;
    fn mul(self, o: &GradedPoly) -> GradedPoly {
        self.mul_poly(o)
    }
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&-Rational::one())
    }
}

/// Constant graded Poisson structure `{a, b} = weight` on generator pairs.
#[derive(Clone, Debug)]
pub struct Pairing {
    /// Grade of the bracket itself (`(1, 0)` for an odd antibracket).
    pub parity: Grade,
    entries: Vec<(Gen, Gen, Rational)>,
}

impl Pairing {
    /// Validates that each generator has at most one partner and that each
    /// entry is compatible with the bracket parity.
    pub fn new(parity: Grade, entries: Vec<(Gen, Gen, Rational)>) -> Result<Pairing> {
        let mut seen = std::collections::HashSet::new();
        for (a, b, w) in &entries {
            if w.is_zero() {
                return Err(Error::Pairing("zero weight".into()));
            }
            if a == b {
                return Err(Error::Pairing("generator paired with itself".into()));
            }
            if !seen.insert(*a) || !seen.insert(*b) {
                return Err(Error::Pairing(format!("generator {:?} has more than one partner", if seen.contains(a) { a } else { b })));
            }
            if a.grade().plus(b.grade()).plus(parity) != Grade::EVEN {
                return Err(Error::Pairing(format!("pair ({:?}, {:?}) incompatible with bracket parity", a, b)));
            }
        }
        Ok(Pairing { parity, entries })
    }

    pub fn entries(&self) -> &[(Gen, Gen, Rational)] {
        &self.entries
    }

    /// `{b, a}` given `{a, b} = w`.
    fn reverse_weight(&self, a: Gen, b: Gen, w: &Rational) -> Rational {
        if a.grade().plus(self.parity).odd_with(b.grade().plus(self.parity)) {
            w.clone()
        } else {
            -w.clone()
        }
    }

    /// `{F, G} = Σ ∂^R_x F · {x, y} · ∂^L_y G`.
    pub fn bracket(&self, f: &GradedPoly, g: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (a, b, w) in &self.entries {
            let fa = f.derive(*a, Side::Right);
            if !fa.is_zero() {
                let gb = g.derive(*b, Side::Left);
                out.add_scaled(&fa.mul_poly(&gb), w);
            }
            let fb = f.derive(*b, Side::Right);
            if !fb.is_zero() {
                let ga = g.derive(*a, Side::Left);
                out.add_scaled(&fb.mul_poly(&ga), &self.reverse_weight(*a, *b, w));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn alpha() -> (Alphabet, Gen, Gen, Gen, Gen) {
        let mut al = Alphabet::new();
        let a = al.add(Bank::Field, GenInfo::new("a", 0, 0, 0, Role::Field)).unwrap();
        let b = al.add(Bank::Field, GenInfo::new("b", 0, 0, 0, Role::Field)).unwrap();
        let x = al.add(Bank::Field, GenInfo::new("x", 0, 1, 0, Role::Field)).unwrap();
        let y = al.add(Bank::Field, GenInfo::new("y", 1, 0, 0, Role::Field)).unwrap();
        (al, a, b, x, y)
    }

    #[test]
    fn odd_squares_vanish() {
        let (_, _, _, x, y) = alpha();
        let px = GradedPoly::gen(x);
        let py = GradedPoly::gen(y);
        assert!((&px * &px).is_zero());
        assert!((&(&px * &py) + &(&py * &px)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let (_, a, _, x, _) = alpha();
        let pa = GradedPoly::gen(a);
        let px = GradedPoly::gen(x);
        let prod = &(&pa + &px) * &(&pa - &px);
        assert_eq!(prod, &pa * &pa);
    }

    #[test]
    fn derivative_sides() {
        let (_, a, _, x, y) = alpha();
        let xy = GradedPoly::word(&[x, y], int(1));
        assert_eq!(xy.derive(x, Side::Left), GradedPoly::gen(y));
        assert_eq!(xy.derive(x, Side::Right), -&GradedPoly::gen(y));
        let a2 = GradedPoly::word(&[a, a], int(1));
        assert_eq!(a2.derive(a, Side::Left), GradedPoly::gen(a).scale(&int(2)));
    }

    #[test]
    fn mixed_bidegree_signs() {
        let mut al = Alphabet::new();
        // δ-odd, form-even: anticommutes with itself
        let u = al.add(Bank::Delta, GenInfo::new("u", 0, 0, 1, Role::DeltaImage)).unwrap();
        // odd in both: commutes with itself, anticommutes with u
        let w = al.add(Bank::Delta, GenInfo::new("w", 1, 0, 1, Role::DeltaImage)).unwrap();
        let x = al.add(Bank::Field, GenInfo::new("x", 1, 0, 0, Role::Field)).unwrap();
        assert!(GradedPoly::word(&[u, u], int(1)).is_zero());
        assert!(!GradedPoly::word(&[w, w], int(1)).is_zero());
        assert_eq!(GradedPoly::word(&[x, u], int(1)), GradedPoly::word(&[u, x], int(1)));
        assert_eq!(GradedPoly::word(&[x, w], int(1)), -&GradedPoly::word(&[w, x], int(1)));
        assert_eq!(GradedPoly::word(&[u, w], int(1)), -&GradedPoly::word(&[w, u], int(1)));
    }

    #[test]
    fn text_roundtrip() {
        let (al, a, b, x, y) = alpha();
        let p = &(&GradedPoly::word(&[y, x, a], rat(-3, 2)) + &GradedPoly::word(&[a, a, b], int(1))) + &GradedPoly::constant(int(7));
        let s = p.format(&al);
        assert_eq!(GradedPoly::parse(&s, &al).unwrap(), p);
        assert_eq!(GradedPoly::parse("- x y + y x", &al).unwrap(), GradedPoly::word(&[y, x], int(2)));
        assert!(GradedPoly::parse("q", &al).is_err());
    }

    #[test]
    fn pairing_validation() {
        let (_, a, b, x, y) = alpha();
        assert!(Pairing::new(Grade::new(1, 0), vec![(a, x, int(1)), (a, y, int(1))]).is_err());
        assert!(Pairing::new(Grade::new(1, 0), vec![(a, b, int(1))]).is_err());
        let p = Pairing::new(Grade::new(1, 0), vec![(a, x, int(1))]).unwrap();
        assert_eq!(p.bracket(&GradedPoly::gen(a), &GradedPoly::gen(x)), GradedPoly::one());
        // {x, a} = -(-1)^{(|a|+1)(|x|+1)} {a, x} = -1
        assert_eq!(p.bracket(&GradedPoly::gen(x), &GradedPoly::gen(a)), -&GradedPoly::one());
        assert!(p.bracket(&GradedPoly::gen(a), &GradedPoly::constant(int(3))).is_zero());
    }
}
