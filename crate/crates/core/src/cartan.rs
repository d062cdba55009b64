//! Cartan matrices: validation, Coxeter labels and the type trichotomy.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, Sign};

/// Coxeter label `m_st` of a pair of reflections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// A single failed axiom. Indices are 0-based; `Display` prints 1-based.
#[derive(Clone, Debug, PartialEq)]
pub enum CartanViolation {
    Diagonal { s: usize, value: f64 },
    PositiveEntry { s: usize, t: usize, value: f64 },
    /// `A_st = 0` while `A_ts != 0`.
    ZeroPattern { s: usize, t: usize },
    /// `A_st A_ts` is neither `>= 4` nor of the form `4 cos^2(pi/k)`.
    Product { s: usize, t: usize, product: f64 },
}

impl fmt::Display for CartanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CartanViolation::Diagonal { s, value } => {
                write!(f, "diagonal entry at ({0},{0}) is {value}, expected 2", s + 1)
            }
            CartanViolation::PositiveEntry { s, t, value } => {
                write!(f, "off-diagonal entry at ({},{}) is positive ({value})", s + 1, t + 1)
            }
            CartanViolation::ZeroPattern { s, t } => write!(
                f,
                "entry at ({},{}) is zero but its transpose ({},{}) is not",
                s + 1,
                t + 1,
                t + 1,
                s + 1
            ),
            CartanViolation::Product { s, t, product } => write!(
                f,
                "product of entries ({},{}) and ({},{}) is {product}, which is neither >= 4 nor 4cos^2(pi/k)",
                s + 1,
                t + 1,
                t + 1,
                s + 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CartanError {
    #[error("Cartan matrix is empty")]
    Empty,
    #[error("Cartan matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid Cartan matrix: {}", join_violations(.0))]
    Invalid(Vec<CartanViolation>),
    #[error("Cartan matrix has components of different types")]
    MixedType,
}

fn join_violations(v: &[CartanViolation]) -> String {
    let mut s = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            s.push_str("; ");
        }
        s.push_str(&alloc::format!("{x}"));
    }
    s
}

/// Type of an irreducible block, or of a whole matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixType {
    Positive,
    Zero,
    Negative,
    /// Reducible with components of different types.
    Mixed,
}

impl MatrixType {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixType::Positive => "positive",
            MatrixType::Zero => "zero",
            MatrixType::Negative => "negative",
            MatrixType::Mixed => "mixed",
        }
    }
}

/// Classification evidence for one irreducible component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentType {
    pub indices: Vec<usize>,
    pub kind: MatrixType,
    /// Perron-Frobenius eigenvalue `2 - rho(2I - A)` estimated in floating point.
    pub lambda: f64,
    /// Distance of `lambda` from the decision threshold; infinite when the
    /// decision was made exactly.
    pub margin: f64,
    /// Approximate decision inside the tolerance band.
    pub warning: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeTag {
    pub overall: MatrixType,
    pub components: Vec<ComponentType>,
}

impl TypeTag {
    pub fn min_margin(&self) -> f64 {
        self.components.iter().fold(f64::INFINITY, |m, c| libm::fmin(m, c.margin))
    }

    pub fn warning(&self) -> bool {
        self.components.iter().any(|c| c.warning)
    }

    pub fn is(&self, t: MatrixType) -> bool {
        self.overall == t
    }
}

/// Validated Cartan matrix with its derived Coxeter labels.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanMatrix<F> {
    a: Matrix<F>,
    orders: Vec<Order>,
    eps: f64,
    residual: f64,
}

fn admissible_label(p: f64, eps: f64) -> Option<(Order, f64)> {
    if p >= 4.0 - eps {
        return Some((Order::Infinite, libm::fmax(0.0, 4.0 - p)));
    }
    if libm::fabs(p) <= eps {
        return Some((Order::Finite(2), libm::fabs(p)));
    }
    if p < 0.0 {
        return None;
    }
    let theta = libm::acos(libm::sqrt(p) / 2.0);
    let k0 = libm::round(core::f64::consts::PI / theta) as i64;
    let mut best: Option<(Order, f64)> = None;
    for k in (k0 - 1).max(3)..=(k0 + 1).max(3) {
        let c = libm::cos(core::f64::consts::PI / k as f64);
        let r = libm::fabs(p - 4.0 * c * c);
        if r <= eps && best.map_or(true, |(_, b)| r < b) {
            best = Some((Order::Finite(k as u32), r));
        }
    }
    best
}

fn exact_label<F: Scalar>(p: &F) -> Option<Order> {
    if p.cmp_eps(&F::from_i64(4), 0.0) != Sign::Negative {
        return Some(Order::Infinite);
    }
    for (v, k) in [(0, 2), (1, 3), (2, 4), (3, 6)] {
        if p.cmp_eps(&F::from_i64(v), 0.0) == Sign::Zero {
            return Some(Order::Finite(k));
        }
    }
    None
}

impl<F: Scalar> CartanMatrix<F> {
    /// Checks the four axioms; in exact mode `eps` is ignored.
    pub fn new(a: Matrix<F>, eps: f64) -> Result<Self, CartanError> {
        if a.rows() != a.cols() {
            return Err(CartanError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        let eps = if F::EXACT { 0.0 } else { eps };
        let mut violations = Vec::new();
        let mut orders = vec![Order::Finite(1); n * n];
        let mut residual: f64 = 0.0;
        let two = F::from_i64(2);
        for s in 0..n {
            if a[(s, s)].cmp_eps(&two, eps) != Sign::Zero {
                violations.push(CartanViolation::Diagonal { s, value: a[(s, s)].to_f64() });
            } else if !F::EXACT {
                residual = libm::fmax(residual, libm::fabs(a[(s, s)].to_f64() - 2.0));
            }
        }
        for s in 0..n {
            for t in 0..n {
                if s == t {
                    continue;
                }
                if a[(s, t)].sign(eps) == Sign::Positive {
                    violations.push(CartanViolation::PositiveEntry { s, t, value: a[(s, t)].to_f64() });
                }
                let zst = a[(s, t)].is_zero_eps(eps);
                let zts = a[(t, s)].is_zero_eps(eps);
                if zst && !zts {
                    violations.push(CartanViolation::ZeroPattern { s, t });
                }
            }
        }
        for s in 0..n {
            for t in s + 1..n {
                let p = a[(s, t)].clone() * a[(t, s)].clone();
                let label = if F::EXACT {
                    exact_label(&p).map(|o| (o, 0.0))
                } else {
                    admissible_label(p.to_f64(), eps)
                };
                match label {
                    Some((o, r)) => {
                        orders[s * n + t] = o;
                        orders[t * n + s] = o;
                        residual = libm::fmax(residual, r);
                    }
                    None => violations.push(CartanViolation::Product { s, t, product: p.to_f64() }),
                }
            }
        }
        if !violations.is_empty() {
            return Err(CartanError::Invalid(violations));
        }
        Ok(CartanMatrix { a, orders, eps, residual })
    }

    pub fn from_rows(rows: &[Vec<F>], eps: f64) -> Result<Self, CartanError> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
            return Err(CartanError::NotSquare { rows: rows.len(), cols });
        }
        Self::new(Matrix::from_rows(rows), eps)
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.a
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn entry(&self, s: usize, t: usize) -> &F {
        &self.a[(s, t)]
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.orders[s * self.size() + t]
    }

    /// Largest deviation of an approximate label from its exact value.
    pub fn label_residual(&self) -> f64 {
        self.residual
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|s| (0..s).all(|t| self.a[(s, t)].cmp_eps(&self.a[(t, s)], self.eps) == Sign::Zero))
    }

    pub fn rank(&self) -> usize {
        self.a.rank(self.eps)
    }

    /// Principal submatrix on `subset` (kept in the given order).
    pub fn restrict(&self, subset: &[usize]) -> Self {
        let m = subset.len();
        let n = self.size();
        let mut orders = Vec::with_capacity(m * m);
        for &s in subset {
            for &t in subset {
                orders.push(self.orders[s * n + t]);
            }
        }
        CartanMatrix { a: self.a.submatrix(subset, subset), orders, eps: self.eps, residual: self.residual }
    }

    /// Irreducible components, each sorted, ordered by smallest index.
    pub fn irreducible_components(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let s = comp[i];
                for t in 0..n {
                    if !seen[t] && !self.a[(s, t)].is_zero_eps(self.eps) {
                        seen[t] = true;
                        comp.push(t);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_irreducible(&self) -> bool {
        self.size() > 0 && self.irreducible_components().len() == 1
    }

    /// The trichotomy, computed blockwise.
    pub fn classify_type(&self) -> TypeTag {
        let mut components = Vec::new();
        for comp in self.irreducible_components() {
            components.push(self.classify_block(comp));
        }
        let overall = match components.first() {
            None => MatrixType::Positive,
            Some(c0) => {
                if components.iter().all(|c| c.kind == c0.kind) {
                    c0.kind
                } else {
                    MatrixType::Mixed
                }
            }
        };
        TypeTag { overall, components }
    }

    fn classify_block(&self, indices: Vec<usize>) -> ComponentType {
        let block = self.a.submatrix(&indices, &indices);
        let perron = perron(&block.to_f64(), false);
        let lambda = perron.lambda;
        if F::EXACT {
            let minors = block.leading_minors();
            let k = minors.len();
            let leading_pos = minors[..k - 1].iter().all(|d| d.sign(0.0) == Sign::Positive);
            let kind = match (leading_pos, minors[k - 1].sign(0.0)) {
                (true, Sign::Positive) => MatrixType::Positive,
                (true, Sign::Zero) => MatrixType::Zero,
                _ => MatrixType::Negative,
            };
            ComponentType { indices, kind, lambda, margin: f64::INFINITY, warning: false }
        } else {
            let eps = self.eps;
            let (kind, warning) = if perron.hi < -eps {
                (MatrixType::Negative, false)
            } else if perron.lo > eps {
                (MatrixType::Positive, false)
            } else {
                (MatrixType::Zero, true)
            };
            ComponentType { indices, kind, lambda, margin: libm::fabs(lambda), warning }
        }
    }

    /// Positive vector `X` whose image `A X` has the sign pattern of the type:
    /// `> 0`, `= 0` or `< 0`. Assembled blockwise.
    pub fn witness_vector(&self) -> Result<WitnessVector<F>, CartanError> {
        let tag = self.classify_type();
        if tag.overall == MatrixType::Mixed {
            return Err(CartanError::MixedType);
        }
        let n = self.size();
        let mut x = vec![F::zero(); n];
        for comp in &tag.components {
            let block = self.a.submatrix(&comp.indices, &comp.indices);
            let v = block_witness(&block, comp.kind, self.eps);
            for (i, &s) in comp.indices.iter().enumerate() {
                x[s] = v[i].clone();
            }
        }
        let ax = self.a.mul_vec(&x);
        Ok(WitnessVector { x, ax, kind: tag.overall, warning: tag.warning() })
    }

    /// Partition of `subset` into the unions of irreducible components of
    /// `A_subset` of positive, zero and negative type.
    pub fn split_by_type(&self, subset: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let (mut pos, mut zero, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        let sub = self.restrict(subset);
        for comp in sub.classify_type().components {
            let target = match comp.kind {
                MatrixType::Positive => &mut pos,
                MatrixType::Zero => &mut zero,
                _ => &mut neg,
            };
            target.extend(comp.indices.iter().map(|&i| subset[i]));
        }
        pos.sort_unstable();
        zero.sort_unstable();
        neg.sort_unstable();
        (pos, zero, neg)
    }

    /// Left Perron vector `Y > 0` of an irreducible matrix, max-normalized,
    /// with its eigenvalue: `Y A = lambda Y`.
    pub fn left_perron(&self) -> (Vec<f64>, f64) {
        let p = perron(&self.a.to_f64(), true);
        (p.vector, p.lambda)
    }

    /// Right Perron vector, as for [`Self::left_perron`].
    pub fn right_perron(&self) -> (Vec<f64>, f64) {
        let p = perron(&self.a.to_f64(), false);
        (p.vector, p.lambda)
    }

    pub fn to_f64(&self) -> CartanMatrix<f64> {
        CartanMatrix { a: self.a.to_f64(), orders: self.orders.clone(), eps: crate::scalar::DEFAULT_EPS, residual: self.residual }
    }

    /// Re-tags an approximate matrix with a different tolerance.
    pub fn with_eps(mut self, eps: f64) -> Self {
        if !F::EXACT {
            self.eps = eps;
        }
        self
    }
}

fn block_witness<F: Scalar>(block: &Matrix<F>, kind: MatrixType, eps: f64) -> Vec<F> {
    let k = block.rows();
    if !F::EXACT {
        let p = perron(&block.to_f64(), false);
        return p.vector.iter().map(|v| F::from_f64(*v)).collect();
    }
    match kind {
        MatrixType::Positive => {
            let ones = vec![F::one(); k];
            block.solve(&ones, eps).expect("positive type block is invertible")
        }
        MatrixType::Zero => {
            let mut v = block.kernel(eps).into_iter().next().expect("zero type block is singular");
            if v[0].sign(0.0) == Sign::Negative {
                v = v.into_iter().map(|x| -x).collect();
            }
            let min = v.iter().skip(1).fold(v[0].clone(), |m, x| if x.cmp_eps(&m, 0.0) == Sign::Negative { x.clone() } else { m });
            v.into_iter().map(|x| x / min.clone()).collect()
        }
        _ => negative_witness(block),
    }
}

/// Exact `X > 0` with `A X < 0`: round the Perron vector to small denominators
/// and verify; fall back to a linear program.
fn negative_witness<F: Scalar>(block: &Matrix<F>) -> Vec<F> {
    let k = block.rows();
    let p = perron(&block.to_f64(), false);
    let check = |x: &[F]| {
        x.iter().all(|v| v.sign(0.0) == Sign::Positive) && block.mul_vec(x).iter().all(|v| v.sign(0.0) == Sign::Negative)
    };
    let mut q: i64 = 1;
    while q <= (1 << 40) {
        let x: Vec<F> = p.vector.iter().map(|v| F::from_frac(libm::round(v * q as f64) as i64, q)).collect();
        if check(&x) {
            return x;
        }
        q *= 2;
        if q == 2 {
            for q3 in [3i64, 6, 12] {
                let x: Vec<F> = p.vector.iter().map(|v| F::from_frac(libm::round(v * q3 as f64) as i64, q3)).collect();
                if check(&x) {
                    return x;
                }
            }
        }
    }
    // LP: maximize t with X >= 1, A X + t <= 0, t <= 1.
    let mut lp = LinearProgram::new(vec![false; k + 1], {
        let mut c = vec![F::zero(); k + 1];
        c[k] = F::one();
        c
    });
    for i in 0..k {
        let mut row = vec![F::zero(); k + 1];
        row[i] = F::one();
        lp.add(row, Relation::Ge, F::one());
        let mut row: Vec<F> = block.row_vec(i);
        row.push(F::one());
        lp.add(row, Relation::Le, F::zero());
    }
    let mut row = vec![F::zero(); k + 1];
    row[k] = F::one();
    lp.add(row, Relation::Le, F::one());
    match lp.solve(0.0) {
        LpOutcome::Optimal { x, .. } => x[..k].to_vec(),
        _ => unreachable!("negative type block admits a witness"),
    }
}

/// `X > 0` with `A X` of the sign of the type.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessVector<F> {
    pub x: Vec<F>,
    pub ax: Vec<F>,
    pub kind: MatrixType,
    pub warning: bool,
}

/// Result of power iteration on `3I - A`.
#[derive(Clone, Debug)]
pub struct Perron {
    pub lambda: f64,
    /// Certified bracket for `lambda` from the Collatz-Wielandt bounds.
    pub lo: f64,
    pub hi: f64,
    pub vector: Vec<f64>,
}

/// Perron data of a Z-matrix with diagonal 2 (of `A^T` when `transpose`).
///
/// `3I - A` is nonnegative with positive diagonal, hence primitive on each
/// irreducible block, so power iteration converges to its Perron root
/// `3 - lambda`.
pub fn perron(a: &Matrix<f64>, transpose: bool) -> Perron {
    let n = a.rows();
    if n == 0 {
        return Perron { lambda: 2.0, lo: 2.0, hi: 2.0, vector: Vec::new() };
    }
    let b = Matrix::from_fn(n, n, |i, j| {
        let v = if transpose { a[(j, i)] } else { a[(i, j)] };
        if i == j {
            3.0 - v
        } else {
            libm::fmax(0.0, -v)
        }
    });
    let mut x = vec![1.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    let scale = libm::fmax(1.0, b.max_abs());
    for _ in 0..100_000 {
        let y = b.mul_vec(&x);
        let mut l = f64::INFINITY;
        let mut h: f64 = 0.0;
        for i in 0..n {
            let r = y[i] / x[i];
            l = libm::fmin(l, r);
            h = libm::fmax(h, r);
        }
        lo = libm::fmax(lo, l);
        hi = libm::fmin(hi, h);
        let m = y.iter().fold(0.0, |m: f64, v| m.max(*v));
        x = y.iter().map(|v| libm::fmax(v / m, f64::MIN_POSITIVE)).collect();
        if hi - lo <= 4.0 * f64::EPSILON * scale * n as f64 {
            break;
        }
    }
    let rho = 0.5 * (lo + hi);
    Perron { lambda: 3.0 - rho, lo: 3.0 - hi, hi: 3.0 - lo, vector: x }
}

/// Exact integer value of an order, if finite.
pub fn order_value(o: Order) -> Option<u32> {
    match o {
        Order::Finite(m) => Some(m),
        Order::Infinite => None,
    }
}

/// `4 cos^2(pi / m)` as an `f64`; `4` for infinity.
pub fn admissible_product(o: Order) -> f64 {
    match o {
        Order::Infinite => 4.0,
        Order::Finite(m) => {
            let c = libm::cos(core::f64::consts::PI / m as f64);
            4.0 * c * c
        }
    }
}

/// Exact admissible product for the rational labels 2, 3, 4, 6.
pub fn rational_product(m: u32) -> Option<i64> {
    match m {
        2 => Some(0),
        3 => Some(1),
        4 => Some(2),
        6 => Some(3),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect::<Vec<_>>())
    }

    #[test]
    fn trichotomy_rank_two() {
        for (m, t) in [
            (qm(&[&[2, -1], &[-1, 2]]), MatrixType::Positive),
            (qm(&[&[2, -2], &[-2, 2]]), MatrixType::Zero),
            (qm(&[&[2, -3], &[-3, 2]]), MatrixType::Negative),
        ] {
            let c = CartanMatrix::new(m, 0.0).unwrap();
            assert_eq!(c.classify_type().overall, t);
            let w = c.witness_vector().unwrap();
            assert_eq!(w.x, vec![Rational::from_i64(1); 2]);
        }
    }

    #[test]
    fn violation_reports_position() {
        let err = CartanMatrix::new(qm(&[&[2, -1], &[0, 2]]), 0.0).unwrap_err();
        match err {
            CartanError::Invalid(v) => {
                assert!(v.contains(&CartanViolation::ZeroPattern { s: 1, t: 0 }));
                assert!(alloc::format!("{}", v[0]).contains("(2,1)"));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn non_admissible_product() {
        let m = Matrix::from_rows(&[
            vec![Rational::from_i64(2), Rational::from_frac(-1, 2)],
            vec![Rational::from_frac(-1, 2), Rational::from_i64(2)],
        ]);
        assert!(matches!(CartanMatrix::new(m, 0.0), Err(CartanError::Invalid(_))));
    }

    #[test]
    fn approx_labels() {
        let c5 = libm::cos(core::f64::consts::PI / 5.0);
        let m = Matrix::from_rows(&[vec![2.0, -2.0 * c5], vec![-2.0 * c5, 2.0]]);
        let c = CartanMatrix::new(m, 1e-9).unwrap();
        assert_eq!(c.order(0, 1), Order::Finite(5));
        assert_eq!(c.classify_type().overall, MatrixType::Positive);
    }

    #[test]
    fn mixed_and_components() {
        let m = qm(&[&[2, -1, 0, 0], &[-1, 2, 0, 0], &[0, 0, 2, -3], &[0, 0, -3, 2]]);
        let c = CartanMatrix::new(m, 0.0).unwrap();
        assert_eq!(c.irreducible_components(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(c.classify_type().overall, MatrixType::Mixed);
        assert_eq!(c.witness_vector(), Err(CartanError::MixedType));
        assert_eq!(c.split_by_type(&[0, 1, 2, 3]), (vec![0, 1], vec![], vec![2, 3]));
        assert_eq!(c.split_by_type(&[]), (vec![], vec![], vec![]));
    }

    #[test]
    fn perron_brackets_lambda() {
        let m = Matrix::from_rows(&[vec![2.0, -3.0], vec![-3.0, 2.0]]);
        let p = perron(&m, false);
        assert!((p.lambda + 1.0).abs() < 1e-12);
        assert!(p.lo <= -1.0 + 1e-12 && p.hi >= -1.0 - 1e-12);
    }
}
