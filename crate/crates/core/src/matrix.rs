//! Dense matrices over the Gaussian rationals, with exact rank by sparse
//! elimination and conversion to floating point.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{gauss_inv, gauss_to_c64, gone, gzero, norm_sqr, to_f64, GaussRational, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| fmt_gauss(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn fmt_gauss(z: &GaussRational) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => z.re.to_string(),
        (true, false) => format!("{}i", z.im),
        (false, false) => format!("{}{}{}i", z.re, if z.im > Rational::zero() { "+" } else { "" }, z.im),
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![gzero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, gone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> GaussRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, s: &GaussRational) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn scale_real(&self, s: &Rational) -> QMat {
        self.scale(&Complex::new(s.clone(), Rational::zero()))
    }

    pub fn neg(&self) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + a * b;
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &QMat) -> QMat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = QMat::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + k, j * other.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &QMat) -> QMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &QMat) -> QMat {
        self.mul(other).add(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn trace(&self) -> GaussRational {
        (0..self.rows.min(self.cols)).fold(gzero(), |acc, i| acc + self.get(i, i))
    }

    /// Returns `c` when the matrix equals `c·Id`.
    pub fn as_scalar(&self) -> Option<GaussRational> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(gzero());
        }
        let c = self.get(0, 0).clone();
        for r in 0..self.rows {
            for col in 0..self.cols {
                let v = self.get(r, col);
                if r == col {
                    if *v != c {
                        return None;
                    }
                } else if !v.is_zero() {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Largest entry modulus, as a float.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| to_f64(&norm_sqr(z)).sqrt()).fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| gauss_to_c64(self.get(r, c)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|z| !z.is_zero()).count()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMat {
        QMat::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    /// Exact rank by sparse Gaussian elimination with a fewest-entries pivot rule.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BTreeMap<usize, GaussRational>> = (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter_map(|c| {
                        let v = self.get(r, c);
                        (!v.is_zero()).then(|| (c, v.clone()))
                    })
                    .collect()
            })
            .filter(|row: &BTreeMap<usize, GaussRational>| !row.is_empty())
            .collect();
        let mut rank = 0;
        while !rows.is_empty() {
            // pick the sparsest row, pivot on its first column
            let (pi, _) = rows.iter().enumerate().min_by_key(|(_, r)| r.len()).unwrap();
            let pivot_row = rows.swap_remove(pi);
            let (&pc, pv) = pivot_row.iter().next().unwrap();
            let pinv = gauss_inv(pv);
            rank += 1;
            for row in rows.iter_mut() {
                let Some(factor) = row.get(&pc).cloned() else { continue };
                let f = factor * &pinv;
                for (c, v) in &pivot_row {
                    let entry = row.entry(*c).or_insert_with(gzero);
                    *entry = &*entry - &f * v;
                    if entry.is_zero() {
                        row.remove(c);
                    }
                }
            }
            rows.retain(|r| !r.is_empty());
        }
        rank
    }
}

/// Inverse of a dense square rational matrix, `None` when singular.
pub fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::from_integer(1.into()) } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        a[col].iter_mut().for_each(|v| *v *= &inv);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let src = a[col].clone();
                a[r].iter_mut().zip(&src).for_each(|(v, s)| *v -= &f * s);
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a·x = b` exactly over the rationals, returning one solution if
/// the system is consistent. `a` is given as sparse rows.
pub fn solve_rational(a: &[BTreeMap<usize, Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    // Gauss-Jordan on the augmented sparse rows.
    let aug_col = ncols;
    let mut rows: Vec<BTreeMap<usize, Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, bv)| {
            let mut row = r.clone();
            row.retain(|_, v| !v.is_zero());
            if !bv.is_zero() {
                row.insert(aug_col, bv.clone());
            }
            row
        })
        .collect();
    let mut pivots: Vec<(usize, BTreeMap<usize, Rational>)> = Vec::new();
    while let Some(mut row) = rows.pop() {
        for (pc, prow) in &pivots {
            if let Some(f) = row.get(pc).cloned() {
                for (c, v) in prow {
                    let e = row.entry(*c).or_insert_with(Rational::zero);
                    *e = &*e - &f * v;
                    if e.is_zero() {
                        row.remove(c);
                    }
                }
            }
        }
        let Some((&c0, v0)) = row.iter().next() else { continue };
        if c0 == aug_col {
            return None;
        }
        let inv = Rational::from_integer(1.into()) / v0;
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        // back-substitute into existing pivots
        for (_, prow) in pivots.iter_mut() {
            if let Some(f) = prow.get(&c0).cloned() {
                for (c, v) in &row {
                    let e = prow.entry(*c).or_insert_with(Rational::zero);
                    *e = &*e - &f * v;
                    if e.is_zero() {
                        prow.remove(c);
                    }
                }
            }
        }
        pivots.push((c0, row));
    }
    let mut x = vec![Rational::zero(); ncols];
    for (c, row) in pivots {
        if let Some(v) = row.get(&aug_col) {
            x[c] = v.clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, greal, int};

    fn pauli() -> [QMat; 3] {
        let x = QMat::from_fn(2, 2, |r, c| if r != c { gone() } else { gzero() });
        let y = QMat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -gi(),
            (1, 0) => gi(),
            _ => gzero(),
        });
        let z = QMat::from_fn(2, 2, |r, c| match (r, c) {
            (0, 0) => gone(),
            (1, 1) => -gone(),
            _ => gzero(),
        });
        [x, y, z]
    }

    #[test]
    fn pauli_anticommute() {
        let p = pauli();
        for a in 0..3 {
            for b in 0..3 {
                let ac = p[a].anticommutator(&p[b]);
                let expect = if a == b { QMat::identity(2).scale(&greal(int(2))) } else { QMat::zeros(2, 2) };
                assert_eq!(ac, expect);
            }
        }
    }

    #[test]
    fn kron_and_rank() {
        let p = pauli();
        let m = p[0].kron(&p[2]);
        assert_eq!(m.rank(), 4);
        assert_eq!(QMat::zeros(3, 3).rank(), 0);
        let singular = QMat::from_fn(3, 3, |r, c| greal(int((r * 3 + c) as i64)));
        assert_eq!(singular.rank(), 2);
        assert_eq!(m.as_scalar(), None);
        assert_eq!(QMat::identity(3).as_scalar(), Some(gone()));
    }

    #[test]
    fn rational_solve() {
        let mut r0 = BTreeMap::new();
        r0.insert(0, int(1));
        r0.insert(1, int(1));
        let mut r1 = BTreeMap::new();
        r1.insert(0, int(1));
        r1.insert(1, int(-1));
        let x = solve_rational(&[r0.clone(), r1], &[int(3), int(1)], 2).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        // inconsistent
        assert!(solve_rational(&[r0.clone(), r0], &[int(1), int(2)], 2).is_none());
    }
}
