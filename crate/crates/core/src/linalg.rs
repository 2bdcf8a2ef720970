//! Dense exact linear algebra over `Q`.
//!
//! Matrices act on column vectors. Subspaces are stored as a reduced row
//! echelon basis of row vectors so that equality is structural.

use crate::rational::Q;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| crate::rational::fmt_q(self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_cols(cols: &[Vec<Q>], rows: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), rows);
            for (r, x) in v.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Q) {
        let x = &mut self.data[r * self.cols + c];
        *x += v;
    }

    pub fn row(&self, r: usize) -> Vec<Q> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut s = Q::zero();
                for (c, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += self.get(r, c) * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = Q::one() / m.get(row, col).clone();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.get(r, c) - &f * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let bm = Matrix::from_cols(&[b.to_vec()], self.rows);
        let (r, pivots) = self.hstack(&bm).rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// A subspace of `Q^ambient`, stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(ambient) }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Q>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec(), ambient);
        Self::from_row_matrix(&m)
    }

    /// Row space of a matrix with `ambient` columns.
    pub fn from_row_matrix(m: &Matrix) -> Self {
        let ambient = m.cols();
        let (r, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|i| r.row(i)).collect();
        Subspace { ambient, basis: Matrix::from_rows(rows, ambient) }
    }

    /// Column space of a matrix.
    pub fn image(m: &Matrix) -> Self {
        Self::from_row_matrix(&m.transpose())
    }

    pub fn kernel_of(m: &Matrix) -> Self {
        Subspace::span(m.cols(), &m.kernel())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn vectors(&self) -> Vec<Vec<Q>> {
        (0..self.basis.rows()).map(|i| self.basis.row(i)).collect()
    }

    /// Basis vectors as the rows of a matrix.
    pub fn row_matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let extended = self.basis.vstack(&Matrix::from_rows(vec![v.to_vec()], self.ambient));
        extended.rank() == self.dim()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        self.sum(other).dim() == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Self::from_row_matrix(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // Solve a·A = b·B, i.e. [A; -B]^T (a,b) = 0.
        let stacked = self.basis.vstack(&other.basis.scale(&-Q::one()));
        let k = stacked.transpose().kernel();
        let vecs: Vec<Vec<Q>> = k
            .iter()
            .map(|coef| {
                let a = &coef[..self.dim()];
                let mut v = vec![Q::zero(); self.ambient];
                for (i, c) in a.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (j, x) in self.basis.row(i).iter().enumerate() {
                        v[j] += c * x;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Preimage of `target` under `m` (a map from `Q^m.cols()`).
    pub fn preimage(m: &Matrix, target: &Subspace) -> Subspace {
        // v with m v ∈ target  <=>  C m v = 0 where rows of C span target^⊥
        let comp = target.annihilator();
        if comp.rows() == 0 {
            return Subspace::full(m.cols());
        }
        Subspace::kernel_of(&comp.mul(m))
    }

    /// Rows spanning the orthogonal complement (w.r.t. the dot product).
    pub fn annihilator(&self) -> Matrix {
        let k = self.basis.kernel();
        if self.dim() == 0 {
            return Matrix::identity(self.ambient);
        }
        Matrix::from_rows(k, self.ambient)
    }

    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let imgs: Vec<Vec<Q>> = self.vectors().iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &imgs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(), cols)
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.apply(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.solve(&[q(3), q(1)]), Some(vec![q(2), q(1)]));
        let b = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(b.solve(&[q(1), q(3)]), None);
    }

    #[test]
    fn subspace_ops() {
        let u = Subspace::span(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let w = Subspace::span(3, &[vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        assert_eq!(u.intersect(&w), Subspace::span(3, &[vec![q(0), q(5), q(0)]]));
        assert_eq!(u.sum(&w), Subspace::full(3));
        assert!(u.contains(&[q(3), q(-2), q(0)]));
        assert!(!u.contains(&[q(0), q(0), q(1)]));
        let p = m(&[&[0, 0, 1], &[1, 0, 0], &[0, 0, 0]]);
        // p v ∈ u  <=>  any v
        assert_eq!(Subspace::preimage(&p, &u).dim(), 3);
        assert_eq!(Subspace::preimage(&p, &Subspace::zero(3)).dim(), 1);
    }
}
