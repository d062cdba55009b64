//! Small dense matrices over a [`Scalar`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::scalar::{Scalar, Sign};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn new(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

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

    /// Builds from rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<F> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.sign(0.0) == Sign::Zero {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.rows, v.len(), "dimension mismatch in vector-matrix product");
        (0..self.cols)
            .map(|j| {
                let mut acc = F::zero();
                for (i, vi) in v.iter().enumerate() {
                    acc = acc + vi.clone() * self[(i, j)].clone();
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| libm::fmax(m, libm::fabs(x.to_f64())))
    }

    /// Zero tolerance scaled by the entry size, so that rank decisions in
    /// approximate mode are invariant under rescaling.
    fn rel_eps(&self, eps: f64) -> f64 {
        if F::EXACT {
            0.0
        } else {
            eps * libm::fmax(1.0, self.max_abs())
        }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, eps: f64) -> (Self, Vec<usize>) {
        let tol = self.rel_eps(eps);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for i in r..m.rows {
                if m[(i, c)].sign(tol) != Sign::Zero {
                    let a = libm::fabs(m[(i, c)].to_f64());
                    if F::EXACT {
                        best = Some((i, a));
                        break;
                    }
                    if best.map_or(true, |(_, b)| a > b) {
                        best = Some((i, a));
                    }
                }
            }
            let Some((p, _)) = best else {
                for i in r..m.rows {
                    m[(i, c)] = F::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = F::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.sign(0.0) == Sign::Zero {
                    continue;
                }
                for j in c..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, eps: f64) -> usize {
        self.rref(eps).1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self, eps: f64) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref(eps);
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for i in c..n {
                if m[(i, c)].sign(0.0) != Sign::Zero {
                    let a = libm::fabs(m[(i, c)].to_f64());
                    if F::EXACT {
                        best = Some((i, a));
                        break;
                    }
                    if best.map_or(true, |(_, b)| a > b) {
                        best = Some((i, a));
                    }
                }
            }
            let Some((p, _)) = best else { return F::zero() };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                let f = m[(i, c)].clone() / piv.clone();
                if f.sign(0.0) == Sign::Zero {
                    continue;
                }
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Leading principal minors `D_1, ..., D_n`.
    pub fn leading_minors(&self) -> Vec<F> {
        let n = self.rows;
        (1..=n)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                self.submatrix(&idx, &idx).det()
            })
            .collect()
    }

    /// Inverse, or `None` when singular up to `eps`.
    pub fn inverse(&self, eps: f64) -> Option<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = F::one();
        }
        let (r, pivots) = aug.rref(eps);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Solves `M x = b` for square invertible `M`.
    pub fn solve(&self, b: &[F], eps: f64) -> Option<Vec<F>> {
        let inv = self.inverse(eps)?;
        Some(inv.mul_vec(b))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Largest entrywise difference, as `f64`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| libm::fmax(m, libm::fabs((a.clone() - b.clone()).to_f64())))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

/// Rank of a list of vectors (rows).
pub fn rank_of<F: Scalar>(vectors: &[Vec<F>], dim: usize, eps: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = Matrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j].clone());
    m.rank(eps)
}

pub fn norm_f64(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn exact_det_and_minors() {
        let m = Matrix::from_rows(&[vec![q(2), q(-1), q(0)], vec![q(-1), q(2), q(-3)], vec![q(0), q(-2), q(2)]]);
        assert_eq!(m.det(), q(-6));
        assert_eq!(m.leading_minors(), vec![q(2), q(3), q(-6)]);
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(&[vec![q(2), q(-2)], vec![q(-2), q(2)]]);
        assert_eq!(m.rank(0.0), 1);
        let k = m.kernel(0.0);
        assert_eq!(k, vec![vec![q(1), q(1)]]);
    }

    #[test]
    fn inverse_roundtrip_f64() {
        let m = Matrix::from_rows(&[vec![4.0, 1.0], vec![2.0, 3.0]]);
        let inv = m.inverse(1e-12).unwrap();
        let id = m.mul(&inv);
        assert!(id.max_abs_diff(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn float_rank_is_scale_invariant() {
        let m = Matrix::from_rows(&[vec![1e6, 2e6], vec![2e6, 4e6 + 1e-7]]);
        assert_eq!(m.rank(1e-9), 1);
    }
}
