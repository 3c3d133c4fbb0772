//! Sparse exact matrices over `Scalar` and fraction-exact elimination.

use crate::scalar::Scalar;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Sorted `(index, value)` pairs with no stored zeros.
pub type SVec = Vec<(usize, Scalar)>;

pub fn svec_axpy(x: &SVec, c: &Scalar, y: &SVec) -> SVec {
    // x + c*y
    if c.is_zero() {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i].clone());
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, c * &y[j].1));
            j += 1;
        } else {
            let v = &x[i].1 + &(c * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn svec_scale(x: &SVec, c: &Scalar) -> SVec {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(k, v)| (*k, c * v)).collect()
}

pub fn svec_from_map(m: BTreeMap<usize, Scalar>) -> SVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Hermitian dot `sum conj(x_i) y_i`.
pub fn svec_hdot(x: &SVec, y: &SVec) -> Scalar {
    let mut s = Scalar::zero();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &x[i].1.conj() * &y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMat {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<SVec>,
}

impl SMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SMat { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SMat::zeros(n, n);
        for i in 0..n {
            m.rows[i].push((i, Scalar::one()));
        }
        m
    }

    pub fn scalar_identity(n: usize, c: &Scalar) -> Self {
        let mut m = SMat::zeros(n, n);
        if !c.is_zero() {
            for i in 0..n {
                m.rows[i].push((i, c.clone()));
            }
        }
        m
    }

    pub fn from_columns(nrows: usize, cols: &[SVec]) -> Self {
        let mut m = SMat::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c {
                m.rows[*i].push((j, v.clone()));
            }
        }
        m
    }

    pub fn from_dense(d: &[Vec<Scalar>]) -> Self {
        let nrows = d.len();
        let ncols = d.first().map_or(0, |r| r.len());
        let rows = d
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        SMat { nrows, ncols, rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(); self.ncols]; self.nrows];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                d[i][*j] = v.clone();
            }
        }
        d
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn columns(&self) -> Vec<SVec> {
        self.transpose().rows
    }

    pub fn column(&self, j: usize) -> SVec {
        let mut c = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if let Ok(k) = r.binary_search_by_key(&j, |e| e.0) {
                c.push((i, r[k].1.clone()));
            }
        }
        c
    }

    pub fn transpose(&self) -> SMat {
        let mut t = SMat::zeros(self.ncols, self.nrows);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                t.rows[*j].push((i, v.clone()));
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> SMat {
        let mut t = SMat::zeros(self.ncols, self.nrows);
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                t.rows[*j].push((i, v.conj()));
            }
        }
        t
    }

    pub fn conj(&self) -> SMat {
        let rows = self.rows.iter().map(|r| r.iter().map(|(j, v)| (*j, v.conj())).collect()).collect();
        SMat { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn mul(&self, o: &SMat) -> SMat {
        assert_eq!(self.ncols, o.nrows, "shape mismatch in product");
        let mut out = SMat::zeros(self.nrows, o.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, a) in r {
                for (j, b) in &o.rows[*k] {
                    *acc.entry(*j).or_insert_with(Scalar::zero) += a * b;
                }
            }
            out.rows[i] = svec_from_map(acc);
        }
        out
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            let s = svec_dot(r, v);
            if !s.is_zero() {
                out.push((i, s));
            }
        }
        out
    }

    pub fn add(&self, o: &SMat) -> SMat {
        self.axpy(&Scalar::one(), o)
    }

    pub fn sub(&self, o: &SMat) -> SMat {
        self.axpy(&Scalar::int(-1), o)
    }

    /// self + c*o
    pub fn axpy(&self, c: &Scalar, o: &SMat) -> SMat {
        assert_eq!((self.nrows, self.ncols), (o.nrows, o.ncols), "shape mismatch in sum");
        let rows = self.rows.iter().zip(&o.rows).map(|(a, b)| svec_axpy(a, c, b)).collect();
        SMat { nrows: self.nrows, ncols: self.ncols, rows }
    }

    pub fn scale(&self, c: &Scalar) -> SMat {
        let rows = self.rows.iter().map(|r| svec_scale(r, c)).collect();
        SMat { nrows: self.nrows, ncols: self.ncols, rows }
    }

    /// Graded commutator `XY - sign YX`.
    pub fn bracket(&self, o: &SMat, sign: i32) -> SMat {
        let s = Scalar::int(-(sign as i64));
        self.mul(o).axpy(&s, &o.mul(self))
    }

    pub fn comm(&self, o: &SMat) -> SMat {
        self.bracket(o, 1)
    }

    pub fn anticomm(&self, o: &SMat) -> SMat {
        self.bracket(o, -1)
    }

    pub fn select_rows(&self, idx: &[usize]) -> SMat {
        SMat { nrows: idx.len(), ncols: self.ncols, rows: idx.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    pub fn select_cols(&self, idx: &[usize]) -> SMat {
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &j) in idx.iter().enumerate() {
            pos[j] = k;
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut nr: SVec = r.iter().filter(|(j, _)| pos[*j] != usize::MAX).map(|(j, v)| (pos[*j], v.clone())).collect();
                nr.sort_by_key(|e| e.0);
                nr
            })
            .collect();
        SMat { nrows: self.nrows, ncols: idx.len(), rows }
    }

    pub fn hstack(&self, o: &SMat) -> SMat {
        assert_eq!(self.nrows, o.nrows);
        let rows = self
            .rows
            .iter()
            .zip(&o.rows)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.ncols, v.clone())));
                r
            })
            .collect();
        SMat { nrows: self.nrows, ncols: self.ncols + o.ncols, rows }
    }

    pub fn vstack(&self, o: &SMat) -> SMat {
        assert_eq!(self.ncols, o.ncols);
        let mut rows = self.rows.clone();
        rows.extend(o.rows.iter().cloned());
        SMat { nrows: self.nrows + o.nrows, ncols: self.ncols, rows }
    }

    /// First nonzero entry, as a counterexample witness.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Scalar)> {
        self.rows.iter().enumerate().find_map(|(i, r)| r.first().map(|(j, v)| (i, *j, v.clone())))
    }
}

pub fn svec_dot(x: &SVec, y: &SVec) -> Scalar {
    let mut s = Scalar::zero();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        match x[i].0.cmp(&y[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &x[i].1 * &y[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

/// Reduced row echelon form of the row space, rows sorted by pivot.
pub struct Echelon {
    pub ncols: usize,
    pub rows: Vec<SVec>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current rows (leaves the non-pivot residue).
    pub fn reduce(&self, v: &SVec) -> SVec {
        let mut r = v.clone();
        let mut k = 0;
        // rows are kept fully reduced and sorted by pivot, so one sweep suffices
        while k < r.len() {
            let col = r[k].0;
            match self.pivots.binary_search(&col) {
                Ok(p) => {
                    let c = -r[k].1.clone();
                    r = svec_axpy(&r, &c, &self.rows[p]);
                }
                Err(_) => k += 1,
            }
        }
        r
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &SVec) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.inv();
        let r = svec_scale(&r, &lead);
        let piv = r[0].0;
        // clear the new pivot column from existing rows
        for row in self.rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&piv, |e| e.0) {
                let c = -row[k].1.clone();
                *row = svec_axpy(row, &c, &r);
            }
        }
        let pos = self.pivots.binary_search(&piv).unwrap_err();
        self.pivots.insert(pos, piv);
        self.rows.insert(pos, r);
        true
    }

    pub fn from_rows(ncols: usize, rows: &[SVec]) -> Self {
        let mut e = Echelon::new(ncols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// Basis of `{x : row . x = 0 for all rows}`, one vector per free column.
    pub fn null_space(&self) -> Vec<SVec> {
        let mut is_piv = vec![false; self.ncols];
        for &p in &self.pivots {
            is_piv[p] = true;
        }
        // column f of the reduced rows gives the pivot coordinates
        let mut colvals: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.ncols];
        for (k, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().skip(1) {
                colvals[*j].push((self.pivots[k], v.clone()));
            }
        }
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if is_piv[f] {
                continue;
            }
            let mut v: SVec = colvals[f].iter().map(|(p, c)| (*p, -c.clone())).collect();
            v.push((f, Scalar::one()));
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

pub fn rank(m: &SMat) -> usize {
    // eliminate along the smaller side
    if m.nrows <= m.ncols {
        Echelon::from_rows(m.ncols, &m.rows).rank()
    } else {
        Echelon::from_rows(m.nrows, &m.transpose().rows).rank()
    }
}

/// Kernel basis as columns of an `ncols x k` matrix.
pub fn kernel(m: &SMat) -> SMat {
    let e = Echelon::from_rows(m.ncols, &m.rows);
    SMat::from_columns(m.ncols, &e.null_space())
}

/// Echelon basis of the column space, as columns.
pub fn image(m: &SMat) -> SMat {
    let e = Echelon::from_rows(m.nrows, &m.transpose().rows);
    SMat::from_columns(m.nrows, &e.rows)
}

/// Basis of the intersection of two column spans (as columns).
pub fn intersect(a: &SMat, b: &SMat) -> SMat {
    // solve a x = b y ; kernel of [a | -b]
    let n = a.nrows;
    let ab = a.hstack(&b.scale(&Scalar::int(-1)));
    let ker = kernel(&ab);
    let xs = ker.select_rows(&(0..a.ncols).collect::<Vec<_>>());
    let v = a.mul(&xs);
    let e = Echelon::from_rows(n, &v.columns());
    SMat::from_columns(n, &e.rows)
}

pub fn span_dim(vs: &SMat) -> usize {
    rank(vs)
}

/// Exact inverse of a square matrix, `None` if singular.
pub fn inverse(m: &SMat) -> Option<SMat> {
    let n = m.nrows;
    assert_eq!(n, m.ncols);
    let aug = m.hstack(&SMat::identity(n));
    let e = Echelon::from_rows(2 * n, &aug.rows);
    if e.rank() < n || e.pivots.iter().take(n).enumerate().any(|(k, &p)| p != k) {
        return None;
    }
    let rows = e.rows[..n]
        .iter()
        .map(|r| r.iter().filter(|(j, _)| *j >= n).map(|(j, v)| (j - n, v.clone())).collect())
        .collect();
    Some(SMat { nrows: n, ncols: n, rows })
}

/// Coordinates of the columns of `v` in the basis given by the columns of `basis`
/// (which must be independent and contain every column of `v`).
pub fn coordinates(basis: &SMat, v: &SMat) -> Option<SMat> {
    let k = basis.ncols;
    let aug = basis.hstack(v);
    let e = Echelon::from_rows(aug.ncols, &aug.rows);
    if e.pivots.iter().any(|&p| p >= k) || e.pivots.len() < k {
        return None;
    }
    let rows = e.rows[..k]
        .iter()
        .map(|r| r.iter().filter(|(j, _)| *j >= k).map(|(j, c)| (j - k, c.clone())).collect())
        .collect();
    Some(SMat { nrows: k, ncols: v.ncols, rows })
}

/// Leading principal minors of a Hermitian matrix, computed exactly.
/// Returns the first index whose minor is not strictly positive, with the minor.
pub fn first_nonpositive_minor(m: &SMat) -> Option<(usize, Scalar)> {
    let n = m.nrows;
    let mut d = m.to_dense();
    // Gaussian elimination without pivoting: pivots are ratios of successive minors
    let mut minor = Scalar::one();
    for k in 0..n {
        let p = d[k][k].clone();
        let next = &minor * &p;
        if !next.is_real() || next.re <= num_rational::BigRational::zero() {
            return Some((k + 1, next));
        }
        minor = next;
        let pinv = p.inv();
        for i in k + 1..n {
            if d[i][k].is_zero() {
                continue;
            }
            let f = &d[i][k] * &pinv;
            for j in k..n {
                if d[k][j].is_zero() {
                    continue;
                }
                let t = &f * &d[k][j];
                d[i][j] -= &t;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: &[&[i64]]) -> SMat {
        SMat::from_dense(&d.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a);
        assert_eq!(k.ncols, 1);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let ai = inverse(&a).unwrap();
        assert_eq!(a.mul(&ai), SMat::identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn intersections() {
        let a = m(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = m(&[&[1, 0], &[0, 0], &[0, 1]]);
        assert_eq!(intersect(&a, &b).ncols, 1);
    }

    #[test]
    fn minors() {
        assert!(first_nonpositive_minor(&m(&[&[2, 1], &[1, 2]])).is_none());
        assert_eq!(first_nonpositive_minor(&m(&[&[1, 2], &[2, 1]])).unwrap().0, 2);
    }
}
