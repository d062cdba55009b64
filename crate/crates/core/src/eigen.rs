//! Small dense eigenproblems, delegated to `nalgebra`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::matrix::{norm_f64, Matrix};

/// Default relative spectral gap for proximality.
pub const DEFAULT_GAP_EPS: f64 = 1e-6;

fn to_na(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

/// Iteration cap for the QR sweeps; the uncapped versions can cycle forever.
const MAX_SWEEPS: usize = 10_000;

/// Eigenvalues as `(re, im)` pairs, sorted by decreasing modulus, or `None`
/// when the Schur iteration does not converge.
pub fn eigenvalues(m: &Matrix<f64>) -> Option<Vec<(f64, f64)>> {
    let n = m.rows();
    let scale = m.max_abs();
    if scale == 0.0 || !scale.is_finite() {
        return (scale == 0.0).then(|| vec![(0.0, 0.0); n]);
    }
    let a = to_na(m) / scale;
    // Shift strategies can cycle on special inputs; a fixed orthogonal
    // similarity or a looser tolerance breaks the cycle.
    let q = householder(n);
    let tries = [(a.clone(), f64::EPSILON), (&q * &a * &q, f64::EPSILON), (a.clone(), 1e-13), (&q * &a * &q, 1e-12)];
    let schur = tries.into_iter().find_map(|(b, eps)| nalgebra::Schur::try_new(b, eps, MAX_SWEEPS))?;
    let mut ev: Vec<(f64, f64)> = schur.complex_eigenvalues().iter().map(|c| (c.re * scale, c.im * scale)).collect();
    ev.sort_by(|a, b| libm::hypot(b.0, b.1).total_cmp(&libm::hypot(a.0, a.1)));
    Some(ev)
}

/// Symmetric orthogonal reflection `I - 2 u u^T` for a fixed generic `u`.
fn householder(n: usize) -> DMatrix<f64> {
    let u = nalgebra::DVector::from_fn(n, |i, _| 1.0 + 0.37 * i as f64 + 0.11 * (i * i) as f64).normalize();
    DMatrix::identity(n, n) - (&u * u.transpose()) * 2.0
}

/// Eigenvalues of a symmetric matrix, ascending, with orthonormal eigenvectors
/// as columns in the same order.
pub fn symmetric_eigen(m: &Matrix<f64>) -> (Vec<f64>, Matrix<f64>) {
    let n = m.rows();
    let e = to_na(m)
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS)
        .expect("symmetric QR iteration converges for the small forms used here");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
    let vals = idx.iter().map(|&i| e.eigenvalues[i]).collect();
    let vecs = Matrix::from_fn(n, n, |r, c| e.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// `(positive, negative, zero)` counts of a symmetric matrix, zero meaning
/// `|lambda| <= tol * max|lambda|`.
pub fn inertia(m: &Matrix<f64>, tol: f64) -> (usize, usize, usize) {
    let (vals, _) = symmetric_eigen(m);
    let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut out = (0, 0, 0);
    for v in vals {
        if v > tol * scale {
            out.0 += 1;
        } else if v < -tol * scale {
            out.1 += 1;
        } else {
            out.2 += 1;
        }
    }
    out
}

/// Attracting eigendirection of a proximal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ProximalWitness {
    /// Top eigenvalue (real, simple).
    pub eigenvalue: f64,
    /// `|lambda_1| / |lambda_2|`.
    pub gap: f64,
    /// Unit eigenvector, first nonzero entry positive.
    pub point: Vec<f64>,
    /// `|g x - lambda x|` for the returned vector.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Proximality {
    Proximal(ProximalWitness),
    No,
    /// Top moduli agree to within the gap tolerance.
    Indeterminate,
}

impl Proximality {
    pub fn witness(&self) -> Option<&ProximalWitness> {
        match self {
            Proximality::Proximal(w) => Some(w),
            _ => None,
        }
    }
}

/// Largest accepted `|g x - lambda x| / |lambda|` for a proximal witness.
pub const MAX_RELATIVE_RESIDUAL: f64 = 1e-8;

/// Is `g` proximal, with relative gap above `gap_eps`?

pub fn detect_proximal(g: &Matrix<f64>, gap_eps: f64) -> Proximality {
    let n = g.rows();
    if n == 0 {
        return Proximality::No;
    }
    let Some(ev) = eigenvalues(g) else { return Proximality::Indeterminate };
    let (re, im) = ev[0];
    let top = libm::hypot(re, im);
    if top == 0.0 || !top.is_finite() {
        return Proximality::No;
    }
    let second = if n > 1 { libm::hypot(ev[1].0, ev[1].1) } else { 0.0 };
    let gap = if second > 0.0 { top / second } else { f64::INFINITY };
    if gap <= 1.0 + gap_eps {
        // A complex pair or an exact tie is a clean negative; a near tie is not.
        let exact_tie = (top - second).abs() <= 64.0 * f64::EPSILON * top;
        return if exact_tie || im.abs() > gap_eps * top { Proximality::No } else { Proximality::Indeterminate };
    }
    if im.abs() > gap_eps * top {
        return Proximality::No;
    }
    let lambda = re;
    let point = match attracting_vector(g, lambda, second) {
        Some(p) => p,
        None => return Proximality::Indeterminate,
    };
    let gx = g.mul_vec(&point);
    let residual = norm_f64(&gx.iter().zip(&point).map(|(a, b)| a - lambda * b).collect::<Vec<_>>());
    // A defective eigenvalue (unipotent parts) splits under rounding into a
    // fake gap of order eps^(1/k); its "eigenvector" then fails to converge.
    if residual > MAX_RELATIVE_RESIDUAL * lambda.abs() {
        return Proximality::Indeterminate;
    }
    Proximality::Proximal(ProximalWitness { eigenvalue: lambda, gap, point, residual })
}

/// Inverse iteration for the eigenvector of the simple eigenvalue `lambda`.
fn attracting_vector(g: &Matrix<f64>, lambda: f64, second: f64) -> Option<Vec<f64>> {
    let n = g.rows();
    let a = to_na(g);
    // Shift slightly off the eigenvalue, towards the outside of the spectrum.
    let sep = (lambda.abs() - second).max(lambda.abs() * 1e-12);
    let mu = lambda + lambda.signum() * sep * 1e-6;
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] -= mu;
    }
    let lu = shifted.lu();
    let mut x = nalgebra::DVector::from_fn(n, |i, _| 1.0 + (i as f64) * 0.1);
    for _ in 0..6 {
        let y = lu.solve(&x)?;
        let nrm = y.norm();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return None;
        }
        x = y / nrm;
    }
    let mut v: Vec<f64> = x.iter().copied().collect();
    normalize_sign(&mut v);
    Some(v)
}

/// Scales to unit length with the largest-magnitude entry positive.
pub fn normalize_sign(v: &mut [f64]) {
    let n = norm_f64(v);
    if n == 0.0 {
        return;
    }
    let k = (0..v.len()).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
    let s = if v[k] < 0.0 { -1.0 / n } else { 1.0 / n };
    for x in v.iter_mut() {
        *x *= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_not_proximal() {
        assert_eq!(detect_proximal(&Matrix::identity(3), DEFAULT_GAP_EPS), Proximality::No);
    }

    #[test]
    fn reflection_is_not_proximal() {
        let r = Matrix::from_rows(&[vec![-1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(detect_proximal(&r, DEFAULT_GAP_EPS), Proximality::No);
    }

    #[test]
    fn rotation_is_not_proximal() {
        let r = Matrix::from_rows(&[vec![0.0, -2.0], vec![2.0, 0.0]]);
        assert_eq!(detect_proximal(&r, DEFAULT_GAP_EPS), Proximality::No);
    }

    #[test]
    fn hyperbolic_diagonal() {
        let g = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]);
        let w = detect_proximal(&g, DEFAULT_GAP_EPS);
        let w = w.witness().unwrap();
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((w.eigenvalue - phi * phi).abs() < 1e-12);
        assert!(w.residual < 1e-12);
        assert!((w.point[1] / w.point[0] - 1.0 / phi).abs() < 1e-12);
    }

    #[test]
    fn lorentzian_inertia() {
        let m = Matrix::from_rows(&[vec![2.0, -2.0, -2.0], vec![-2.0, 2.0, -2.0], vec![-2.0, -2.0, 2.0]]);
        assert_eq!(inertia(&m, 1e-12), (2, 1, 0));
    }
}
