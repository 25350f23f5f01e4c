//! Dense exact linear algebra over the rationals, sized for graded pieces.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::lincomb::{Comb, Rational};

/// A dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The matrix whose columns are the coordinates of `columns` against the
    /// union of their supports (or `row_basis` when given), plus that basis.
    pub fn from_columns<K: Ord + Clone>(columns: &[Comb<K>], row_basis: Option<&[K]>) -> (Self, Vec<K>) {
        let basis: Vec<K> = match row_basis {
            Some(b) => b.to_vec(),
            None => {
                let mut keys: Vec<K> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
                keys.sort();
                keys.dedup();
                keys
            }
        };
        let index: BTreeMap<&K, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut m = Self::zeros(basis.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (k, c) in col {
                if let Some(&i) = index.get(k) {
                    m[(i, j)] = c.clone();
                }
            }
        }
        (m, basis)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = Rational::one() / &self[(r, c)];
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if self[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &self[(i, j)] - &f * &self[(r, j)];
                    self[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
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
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = &out[(i, j)] + a * &other[(k, j)];
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    /// Upper unitriangular with respect to the given index order.
    pub fn is_unitriangular(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self[(i, i)].is_one() && (0..i).all(|j| self[(i, j)].is_zero())
            })
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
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

/// Rank of the span of a family of combinations.
pub fn span_rank<K: Ord + Clone>(vectors: &[Comb<K>]) -> usize {
    Matrix::from_columns(vectors, None).0.rank()
}

/// Recombines coordinate vectors into combinations over `basis`.
pub fn to_combs<K: Ord + Clone>(vectors: &[Vec<Rational>], basis: &[K]) -> Vec<Comb<K>> {
    vectors
        .iter()
        .map(|v| basis.iter().cloned().zip(v.iter().cloned()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                out[(i, j)] = int(v);
            }
        }
        out
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: Rational = (0..3).map(|j| &a[(0, j)] * &v[j]).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let b = m(&[&[1, 1], &[0, 2]]).inverse().unwrap();
        assert_eq!(b[(1, 1)], frac(1, 2));
    }

    #[test]
    fn unitriangular() {
        assert!(m(&[&[1, 5], &[0, 1]]).is_unitriangular());
        assert!(!m(&[&[1, 0], &[3, 1]]).is_unitriangular());
    }
}
