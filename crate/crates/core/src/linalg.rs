//! Exact dense matrices and sparse echelon bases over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::exactpoly::{Rational, UPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
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

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        (0..k).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// `A B - B A`
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = Rational::one() / &m[(r, c)];
            for j in c..m.cols {
                m[(r, j)] *= &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let delta = &f * &m[(r, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] / &piv;
                    for j in c..n {
                        let delta = &f * &m[(c, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
        }
        det
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Characteristic polynomial `det(t I - A)` by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> UPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            m = self.mul(&m).add(&Self::identity(n).scale(&coeffs[n + 1 - k]));
            let am = self.mul(&m);
            coeffs[n - k] = -am.trace() / Rational::from_integer((k as i64).into());
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Monic minimal polynomial, from the first linear dependency among
    /// `I, A, A^2, ...`.
    pub fn minimal_polynomial(&self) -> UPoly {
        assert!(self.is_square());
        let n = self.rows;
        let mut powers: Vec<Matrix> = vec![Self::identity(n)];
        let mut basis: Echelon<usize> = Echelon::new();
        loop {
            let last = powers.last().unwrap();
            let vec: BTreeMap<usize, Rational> = last
                .data
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect();
            if basis.contains(&vec) {
                let k = powers.len() - 1;
                // Solve sum_{i<k} c_i A^i = A^k.
                let mut cols = Self::zeros(n * n, k);
                for (j, p) in powers[..k].iter().enumerate() {
                    for (i, v) in p.data.iter().enumerate() {
                        cols[(i, j)] = v.clone();
                    }
                }
                let c = cols.solve(&powers[k].data).expect("dependency exists");
                let mut coeffs: Vec<Rational> = c.into_iter().map(|v| -v).collect();
                coeffs.push(Rational::one());
                return UPoly::from_coeffs(coeffs);
            }
            basis.insert(vec);
            let next = last.mul(self);
            powers.push(next);
        }
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_poly(&self, p: &UPoly) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        p.coeffs()
            .iter()
            .rev()
            .fold(Self::zeros(n, n), |acc, c| acc.mul(self).add(&Self::identity(n).scale(c)))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }

    /// Diagonalizable over the algebraic closure.
    pub fn is_semisimple(&self) -> bool {
        self.minimal_polynomial().is_squarefree()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Sparse vector keyed by an ordered index set.
pub type SparseVec<K> = BTreeMap<K, Rational>;

pub fn sparse_axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += a * v;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

/// Reduced row echelon basis of sparse vectors.
///
/// Each row's pivot is its largest key and carries coefficient 1; every
/// pivot column is zero in all other rows. Rows are stored by descending
/// pivot, so the basis of a given span is unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<(K, SparseVec<K>)>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.iter().map(|(k, _)| k)
    }

    /// Remainder of `v` after eliminating every pivot.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        for (p, row) in &self.rows {
            if let Some(c) = out.get(p).cloned() {
                sparse_axpy(&mut out, &-c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the stored rows, or `None` if `v` is outside
    /// the span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.iter().map(|(p, _)| v.get(p).cloned().unwrap_or_else(Rational::zero)).collect())
    }

    /// Add `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let mut r = self.reduce(&v);
        let Some((pivot, lead)) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / lead;
        for c in r.values_mut() {
            *c *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if let Some(c) = row.get(&pivot).cloned() {
                sparse_axpy(row, &-c, &r);
            }
        }
        let pos = self.rows.partition_point(|(p, _)| *p > pivot);
        self.rows.insert(pos, (pivot, r));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;

    #[test]
    fn inverse_and_det() {
        let a = Matrix::from_ints(&[&[2, 1], &[7, 4]]);
        assert_eq!(a.determinant(), int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn charpoly_and_minpoly() {
        let j = Matrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(j.charpoly(), UPoly::from_ints(&[1, -2, 1]));
        assert_eq!(j.minimal_polynomial(), UPoly::from_ints(&[1, -2, 1]));
        assert!(!j.is_semisimple());
        let d = Matrix::from_ints(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(d.minimal_polynomial(), UPoly::from_ints(&[6, -5, 1]));
        assert!(d.is_semisimple());
        assert!(d.eval_poly(&d.charpoly()).is_zero());
    }

    #[test]
    fn nullspace_rank() {
        let a = Matrix::from_ints(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn echelon_is_canonical() {
        let v = |pairs: &[(u32, i64)]| -> SparseVec<u32> { pairs.iter().map(|&(k, c)| (k, int(c))).collect() };
        let mut a = Echelon::new();
        assert!(a.insert(v(&[(2, 1), (1, 1)])));
        assert!(a.insert(v(&[(1, 1), (0, 1)])));
        assert!(!a.insert(v(&[(2, 1), (0, -1)])));
        let mut b = Echelon::new();
        b.insert(v(&[(1, 3), (0, 3)]));
        b.insert(v(&[(2, 2), (0, -2)]));
        assert_eq!(a, b);
        assert_eq!(a.express(&v(&[(2, 2), (1, 4), (0, 2)])), Some(vec![int(2), int(4)]));
    }
}
