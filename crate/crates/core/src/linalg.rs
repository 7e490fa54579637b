//! Dense exact matrices with Gaussian elimination.
//!
//! Positive semidefiniteness is decided exactly by an LDL* pivot scan.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use crate::scalar::StarField;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

impl<F: StarField> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix unit `E_{r,c}` of size `n`.
    pub fn unit(n: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(r, c)] = F::one();
        m
    }

    /// Permutation matrix sending basis vector `j` to basis vector `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = F::one();
        }
        m
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

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self[(r, c)].is_one()
                    } else {
                        self[(r, c)].is_zero()
                    }
                })
            })
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r..self.cols).all(|c| self[(r, c)] == self[(c, r)].conj()))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let slot = &mut out[(r, c)];
                    *slot = slot.clone() + prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(F::zero(), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        acc + a.clone() * b.clone()
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    /// Block-diagonal matrix with the given square-or-not blocks on the diagonal.
    pub fn block_diag(blocks: &[Matrix<F>]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Square sub-block starting at `offset` of size `n`.
    pub fn sub_block(&self, offset: usize, n: usize) -> Self {
        Self::from_fn(n, n, |r, c| self[(offset + r, offset + c)].clone())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Row-reduces using pivots only among the first `pivot_cols` columns.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = F::one() / self[(row, col)].clone();
            for c in 0..self.cols {
                let v = self[(row, c)].clone() * inv.clone();
                self[(row, c)] = v;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self[(r, col)].clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let pivot_entry = self[(row, c)].clone();
                    if pivot_entry.is_zero() {
                        continue;
                    }
                    let v = self[(r, c)].clone() - factor.clone() * pivot_entry;
                    self[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self·x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        Solver::new(self).solve(b)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = F::one();
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return None;
        }
        Some(Self::from_fn(n, n, |r, c| aug[(r, n + c)].clone()))
    }

    /// Exact test of `x* M x ≥ 0` for all `x`, by symmetric-pivoted LDL*.
    pub fn is_positive_semidefinite(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let mut m = self.clone();
        let mut active: Vec<usize> = (0..m.rows).collect();
        while !active.is_empty() {
            if active.iter().any(|&i| m[(i, i)].re_sign() == Ordering::Less) {
                return false;
            }
            let Some(pos) = active.iter().position(|&i| m[(i, i)].re_sign() == Ordering::Greater)
            else {
                // All remaining diagonal entries vanish; PSD forces the rest to vanish too.
                return active.iter().all(|&r| active.iter().all(|&c| m[(r, c)].is_zero()));
            };
            let k = active.remove(pos);
            let pivot = m[(k, k)].clone();
            for &r in &active {
                let lr = m[(r, k)].clone();
                if lr.is_zero() {
                    continue;
                }
                for &c in &active {
                    let kc = m[(k, c)].clone();
                    if kc.is_zero() {
                        continue;
                    }
                    let v = m[(r, c)].clone() - lr.clone() * kc / pivot.clone();
                    m[(r, c)] = v;
                }
            }
        }
        true
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.adjoint().mul(self).is_identity()
    }
}

/// Precomputed elimination for repeatedly solving `A·x = b` with one `A`.
#[derive(Clone, Debug)]
pub struct Solver<F> {
    cols: usize,
    reduced: Matrix<F>,
    transform: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: StarField> Solver<F> {
    pub fn new(a: &Matrix<F>) -> Self {
        let (rows, cols) = (a.rows(), a.cols());
        let mut aug = Matrix::zeros(rows, cols + rows);
        for r in 0..rows {
            for c in 0..cols {
                aug[(r, c)] = a[(r, c)].clone();
            }
            aug[(r, cols + r)] = F::one();
        }
        let pivots = aug.rref_in_place(cols);
        let reduced = Matrix::from_fn(rows, cols, |r, c| aug[(r, c)].clone());
        let transform = Matrix::from_fn(rows, rows, |r, c| aug[(r, cols + c)].clone());
        Solver { cols, reduced, transform, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solution with all free variables set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let eb = self.transform.mul_vec(b);
        if eb[self.pivots.len()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in self.pivots.iter().enumerate() {
            x[p] = eb[i].clone();
        }
        debug_assert!(self.reduced.rows() == b.len());
        Some(x)
    }
}

/// Incrementally maintained linear span of vectors in `F^n`.
#[derive(Clone, Debug)]
pub struct Span<F> {
    len: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: StarField> Span<F> {
    pub fn new(len: usize) -> Self {
        Span { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.len, "vector length");
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let f = v[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / r[p].clone();
        let r: Vec<F> = r.into_iter().map(|x| x * inv.clone()).collect();
        self.rows.push((p, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussRat;

    fn q(n: i64) -> GaussRat {
        GaussRat::from_i64(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix<GaussRat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(a.solve(&[q(1), q(3)]).is_none());
        let x = a.solve(&[q(1), q(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(1), q(2)]);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn psd_test_is_exact() {
        assert!(m(&[&[2, 1], &[1, 2]]).is_positive_semidefinite());
        assert!(m(&[&[1, 1], &[1, 1]]).is_positive_semidefinite());
        assert!(!m(&[&[1, 2], &[2, 1]]).is_positive_semidefinite());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_positive_semidefinite());
        assert!(m(&[&[0, 0], &[0, 0]]).is_positive_semidefinite());
        // [[1, i], [-i, 1]] is a rank-one projection times 2.
        let i = GaussRat::i();
        let h = Matrix::from_rows(vec![vec![q(1), i.clone()], vec![-i, q(1)]]);
        assert!(h.is_positive_semidefinite());
        assert!(!m(&[&[1, 2], &[3, 4]]).is_positive_semidefinite());
    }

    #[test]
    fn span_membership() {
        let mut s = Span::new(3);
        assert!(s.insert(&[q(1), q(1), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(!s.insert(&[q(1), q(2), q(1)]));
        assert!(s.contains(&[q(2), q(1), q(-1)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn permutation_matrices_are_unitary() {
        let p: Matrix<GaussRat> = Matrix::permutation(&[2, 0, 1]);
        assert!(p.is_unitary());
        assert_eq!(p.mul_vec(&[q(1), q(2), q(3)]), vec![q(2), q(3), q(1)]);
    }
}
