//! Coxeter systems, Gram matrices and the spherical/affine/large trichotomy.

use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::{CartanMatrix, MatrixType, Order};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar, DEFAULT_EPS};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CoxeterError {
    #[error("Coxeter matrix is empty")]
    Empty,
    #[error("Coxeter matrix is not square")]
    NotSquare,
    #[error("Coxeter matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("Coxeter matrix entry ({0},{1}) must be {2}")]
    BadEntry(usize, usize, &'static str),
}

/// Symmetric matrix of orders `m_st`, with `m_ss = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    n: usize,
    m: Vec<Order>,
}

/// Class of one irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Spherical,
    Affine,
    Large,
}

impl GroupKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupKind::Spherical => "spherical",
            GroupKind::Affine => "affine",
            GroupKind::Large => "large",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupClass {
    /// Common class of all components, if uniform.
    pub overall: Option<GroupKind>,
    pub components: Vec<(Vec<usize>, GroupKind)>,
    /// Some component was decided inside the tolerance band.
    pub warning: bool,
}

impl GroupClass {
    pub fn is(&self, k: GroupKind) -> bool {
        self.overall == Some(k)
    }
}

impl CoxeterMatrix {
    pub fn new(rows: &[Vec<Order>]) -> Result<Self, CoxeterError> {
        let n = rows.len();
        if n == 0 {
            return Err(CoxeterError::Empty);
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(CoxeterError::NotSquare);
        }
        for s in 0..n {
            for t in 0..n {
                let v = rows[s][t];
                if s == t && v != Order::Finite(1) {
                    return Err(CoxeterError::BadEntry(s + 1, t + 1, "1"));
                }
                if s != t {
                    if matches!(v, Order::Finite(k) if k < 2) {
                        return Err(CoxeterError::BadEntry(s + 1, t + 1, ">= 2 or inf"));
                    }
                    if rows[t][s] != v {
                        return Err(CoxeterError::NotSymmetric(s + 1, t + 1));
                    }
                }
            }
        }
        Ok(CoxeterMatrix { n, m: rows.iter().flatten().copied().collect() })
    }

    /// Labels read off the products `A_st A_ts`.
    pub fn from_cartan<F: Scalar>(a: &CartanMatrix<F>) -> Self {
        let n = a.size();
        let mut m = Vec::with_capacity(n * n);
        for s in 0..n {
            for t in 0..n {
                m.push(a.order(s, t));
            }
        }
        CoxeterMatrix { n, m }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn order(&self, s: usize, t: usize) -> Order {
        self.m[s * self.n + t]
    }

    pub fn rows(&self) -> Vec<Vec<Order>> {
        (0..self.n).map(|s| (0..self.n).map(|t| self.order(s, t)).collect()).collect()
    }

    /// True when every label is in `{1, 2, 3, inf}`, so the Gram matrix is rational.
    pub fn gram_is_rational(&self) -> bool {
        self.m.iter().all(|o| matches!(o, Order::Finite(1..=3) | Order::Infinite))
    }

    /// `(-2 cos(pi/m_st))` as an exact matrix, when rational.
    pub fn gram_exact(&self) -> Option<CartanMatrix<Rational>> {
        if !self.gram_is_rational() {
            return None;
        }
        let m = Matrix::from_fn(self.n, self.n, |s, t| match self.order(s, t) {
            Order::Finite(1) => Rational::from_i64(2),
            Order::Finite(2) => Rational::from_i64(0),
            Order::Finite(3) => Rational::from_i64(-1),
            _ => Rational::from_i64(-2),
        });
        Some(CartanMatrix::new(m, 0.0).expect("Gram matrix satisfies the Cartan axioms"))
    }

    /// `(-2 cos(pi/m_st))` in floating point.
    pub fn gram_approx(&self, eps: f64) -> CartanMatrix<f64> {
        let m = Matrix::from_fn(self.n, self.n, |s, t| match self.order(s, t) {
            Order::Finite(1) => 2.0,
            Order::Finite(2) => 0.0,
            Order::Finite(k) => -2.0 * libm::cos(core::f64::consts::PI / k as f64),
            Order::Infinite => -2.0,
        });
        let c = CartanMatrix::new(m, eps).expect("Gram matrix satisfies the Cartan axioms");
        debug_assert_eq!(CoxeterMatrix::from_cartan(&c), *self);
        c
    }

    /// Classification of every irreducible component by definiteness of its
    /// Gram block.
    pub fn classify_group(&self, eps: f64) -> GroupClass {
        let tag = match self.gram_exact() {
            Some(g) => g.classify_type(),
            None => self.gram_approx(eps).classify_type(),
        };
        let mut components = Vec::new();
        let mut warning = false;
        for c in tag.components {
            warning |= c.warning;
            let k = match c.kind {
                MatrixType::Positive => GroupKind::Spherical,
                MatrixType::Zero => GroupKind::Affine,
                _ => GroupKind::Large,
            };
            components.push((c.indices, k));
        }
        let overall = match components.first() {
            Some((_, k0)) if components.iter().all(|(_, k)| k == k0) => Some(*k0),
            _ => None,
        };
        GroupClass { overall, components, warning }
    }

    /// Generators commuting with every element of `subset`.
    pub fn orthogonal_complement(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.n).filter(|&s| subset.iter().all(|&t| self.order(s, t) == Order::Finite(2))).collect()
    }

    pub fn restrict(&self, subset: &[usize]) -> Self {
        let k = subset.len();
        let mut m = Vec::with_capacity(k * k);
        for &s in subset {
            for &t in subset {
                m.push(self.order(s, t));
            }
        }
        CoxeterMatrix { n: k, m }
    }

    /// Is this the affine diagram of type `A~_{n-1}` (a cycle, all labels 3,
    /// or `A~_1` with label inf)?
    pub fn is_affine_a_tilde(&self) -> bool {
        let n = self.n;
        if n == 2 {
            return self.order(0, 1) == Order::Infinite;
        }
        if n < 3 {
            return false;
        }
        let mut degree = vec![0; n];
        for s in 0..n {
            for t in 0..n {
                match self.order(s, t) {
                    Order::Finite(1) | Order::Finite(2) => {}
                    Order::Finite(3) => degree[s] += 1,
                    _ => return false,
                }
            }
        }
        degree.iter().all(|&d| d == 2) && self.gram_exact().map_or(false, |g| g.is_irreducible())
    }
}

/// Group class of a Coxeter polytope from its Cartan matrix.
pub fn classify_cartan_group<F: Scalar>(a: &CartanMatrix<F>) -> GroupClass {
    let eps = if F::EXACT { DEFAULT_EPS } else { a.eps() };
    CoxeterMatrix::from_cartan(a).classify_group(eps)
}

/// Cartan matrix in either arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyCartan {
    Exact(CartanMatrix<Rational>),
    Approx(CartanMatrix<f64>),
}

impl AnyCartan {
    /// Gram matrix of `m`, exact when possible unless `force_approx`.
    pub fn gram(m: &CoxeterMatrix, force_approx: bool, eps: f64) -> Self {
        match m.gram_exact() {
            Some(g) if !force_approx => AnyCartan::Exact(g),
            _ => AnyCartan::Approx(m.gram_approx(eps)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            AnyCartan::Exact(a) => a.size(),
            AnyCartan::Approx(a) => a.size(),
        }
    }
}
