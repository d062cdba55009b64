//! Coxeter polytopes, their faces, links and joins.
//!
//! A polytope is stored as facet pairs `(alpha_s, v_s)` in `V = R^{d+1}`.
//! The preferred lift is the cone `Delta = {x : alpha_s(x) <= 0 for all s}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::{CartanError, CartanMatrix, MatrixType, TypeTag};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::matrix::{dot, rank_of, Matrix};
use crate::scalar::{Scalar, Sign};

/// Default cap on the number of facets for exhaustive face scans.
pub const DEFAULT_MAX_FACETS: usize = 16;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum PolytopeError {
    #[error("polytope has no facets")]
    Empty,
    #[error("facet {0} has vectors of inconsistent length")]
    DimensionMismatch(usize),
    #[error("facet {s} is not normalized: alpha(v) = {value}, expected 2")]
    Normalization { s: usize, value: f64 },
    #[error("covectors have a common kernel of dimension {0}; the input is not reduced")]
    NotReduced(usize),
    #[error("the cone cut out by the covectors has empty interior")]
    EmptyInterior,
    #[error("facet {0} is redundant")]
    RedundantFacet(usize),
    #[error(transparent)]
    InvalidCartan(#[from] CartanError),
    #[error("{n} facets exceed the configured maximum of {cap}")]
    TooManyFacets { n: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("internal consistency failure: {0}")]
    Consistency(&'static str),
}

/// Facet pairs with their Cartan matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CoxeterPolytope<F> {
    alpha: Matrix<F>,
    polar: Matrix<F>,
    cartan: CartanMatrix<F>,
    eps: f64,
}

/// How a face sits with respect to its link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceKind {
    Elliptic,
    ZeroType { parabolic: bool },
    NegativeType { loxodromic: bool },
    Mixed,
}

impl FaceKind {
    pub fn label(self) -> &'static str {
        match self {
            FaceKind::Elliptic => "elliptic",
            FaceKind::ZeroType { parabolic: true } => "parabolic",
            FaceKind::ZeroType { parabolic: false } => "zero",
            FaceKind::NegativeType { loxodromic: true } => "loxodromic",
            FaceKind::NegativeType { loxodromic: false } => "negative",
            FaceKind::Mixed => "mixed",
        }
    }

    pub fn is_parabolic(self) -> bool {
        self == FaceKind::ZeroType { parabolic: true }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, FaceKind::NegativeType { .. })
    }
}

/// A face certified by a witness point in its relative interior.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceDescriptor<F> {
    /// `S_f`, sorted.
    pub facets: Vec<usize>,
    /// `alpha_s(x) = 0` on `S_f`, `< 0` elsewhere.
    pub witness: Vec<F>,
    /// `d - rank{alpha_s : s in S_f}`; `-1` for the empty face.
    pub dim: i64,
    /// `rank{alpha_s : s in S_f}`, the dimension of `V / Span f`.
    pub alpha_rank: usize,
    pub link: CartanMatrix<F>,
    pub type_tag: TypeTag,
    pub kind: FaceKind,
    /// Optimal slack of the face program, in `f64`.
    pub margin: f64,
}

impl<F: Scalar> FaceDescriptor<F> {
    pub fn is_vertex(&self) -> bool {
        self.dim == 0
    }
}

/// Outcome of a predicate scan over vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct PredicateResult<F> {
    pub holds: bool,
    /// First offending vertex, if any.
    pub certificate: Option<FaceDescriptor<F>>,
}

/// Factors of a join, with the subspaces they live in.
#[derive(Clone, Debug, PartialEq)]
pub struct JoinStructure<F> {
    /// Facet blocks, in the order of the factors.
    pub blocks: Vec<Vec<usize>>,
    pub factors: Vec<CoxeterPolytope<F>>,
    /// Columns form a basis of the factor's subspace `V_i`.
    pub embeddings: Vec<Matrix<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition<F> {
    Indecomposable,
    Join(JoinStructure<F>),
}

/// Subsets of `0..n` ordered by size, then lexicographically.
pub fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u64..(1u64 << n))
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

impl<F: Scalar> CoxeterPolytope<F> {
    /// Validates facet pairs given as covector rows and polar rows.
    pub fn new(alphas: Vec<Vec<F>>, polars: Vec<Vec<F>>, eps: f64) -> Result<Self, PolytopeError> {
        let eps = if F::EXACT { 0.0 } else { eps };
        let n = alphas.len();
        if n == 0 || polars.len() != n {
            return Err(if n == 0 { PolytopeError::Empty } else { PolytopeError::DimensionMismatch(polars.len().min(n)) });
        }
        let dim = alphas[0].len();
        if dim == 0 {
            return Err(PolytopeError::DimensionMismatch(0));
        }
        for s in 0..n {
            if alphas[s].len() != dim || polars[s].len() != dim {
                return Err(PolytopeError::DimensionMismatch(s));
            }
            let val = dot(&alphas[s], &polars[s]);
            if val.cmp_eps(&F::from_i64(2), eps) != Sign::Zero {
                return Err(PolytopeError::Normalization { s, value: val.to_f64() });
            }
        }
        let alpha = Matrix::from_rows(&alphas);
        let polar = Matrix::from_rows(&polars);
        let rank = alpha.rank(eps);
        if rank < dim {
            return Err(PolytopeError::NotReduced(dim - rank));
        }
        let a = alpha.mul(&polar.transpose());
        // Placeholder Cartan data until the matrix is validated below.
        let probe = CoxeterPolytope { alpha: alpha.clone(), polar: polar.clone(), cartan: trivial_cartan(n, eps), eps };
        if probe.face_program(&[]).is_none() {
            return Err(PolytopeError::EmptyInterior);
        }
        for s in 0..n {
            if probe.face_program(&[s]).is_none() {
                return Err(PolytopeError::RedundantFacet(s));
            }
        }
        let cartan = CartanMatrix::new(a, eps)?;
        Ok(CoxeterPolytope { alpha, polar, cartan, eps })
    }

    /// Tits polytope: dual canonical basis and the columns of `A`.
    pub fn tits(a: &CartanMatrix<F>) -> Self {
        let n = a.size();
        let alpha = Matrix::identity(n);
        let polar = a.matrix().transpose();
        CoxeterPolytope { alpha, polar, cartan: a.clone(), eps: a.eps() }
    }

    /// Assembles a polytope whose Cartan matrix is known to be valid.
    fn from_parts(alpha: Matrix<F>, polar: Matrix<F>, eps: f64) -> Self {
        let a = alpha.mul(&polar.transpose());
        let cartan = CartanMatrix::new(a, eps).expect("derived Cartan matrix is valid");
        CoxeterPolytope { alpha, polar, cartan, eps }
    }

    pub fn num_facets(&self) -> usize {
        self.alpha.rows()
    }

    /// Projective dimension `d`.
    pub fn dim(&self) -> usize {
        self.alpha.cols() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.alpha.cols()
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn cartan(&self) -> &CartanMatrix<F> {
        &self.cartan
    }

    pub fn alpha(&self, s: usize) -> &[F] {
        self.alpha.row(s)
    }

    pub fn polar(&self, s: usize) -> &[F] {
        self.polar.row(s)
    }

    pub fn alphas(&self) -> &Matrix<F> {
        &self.alpha
    }

    pub fn polars(&self) -> &Matrix<F> {
        &self.polar
    }

    pub fn to_f64(&self) -> CoxeterPolytope<f64> {
        CoxeterPolytope {
            alpha: self.alpha.to_f64(),
            polar: self.polar.to_f64(),
            cartan: self.cartan.to_f64(),
            eps: if F::EXACT { crate::scalar::DEFAULT_EPS } else { self.eps },
        }
    }

    /// `rank{alpha_s : s in subset}`.
    pub fn alpha_rank(&self, subset: &[usize]) -> usize {
        if subset.is_empty() {
            return 0;
        }
        self.alpha.select_rows(subset).rank(self.eps)
    }

    /// Maximize `t` subject to `alpha_s(x) = 0` on `subset`, `alpha_s(x) + t <= 0`
    /// elsewhere and `t <= 1`. Returns the witness and `t` when `t > 0`.
    fn face_program(&self, subset: &[usize]) -> Option<(Vec<F>, F)> {
        let m = self.ambient_dim();
        let n = self.num_facets();
        let mut obj = vec![F::zero(); m + 1];
        obj[m] = F::one();
        let mut lp = LinearProgram::new(vec![true; m + 1], obj);
        let scale = if F::EXACT { F::one() } else { F::from_f64(1.0 / libm::fmax(1e-300, self.alpha.max_abs())) };
        for s in 0..n {
            let mut row: Vec<F> = self.alpha.row(s).iter().map(|v| v.clone() * scale.clone()).collect();
            if subset.contains(&s) {
                row.push(F::zero());
                lp.add(row, Relation::Eq, F::zero());
            } else {
                row.push(F::one());
                lp.add(row, Relation::Le, F::zero());
            }
        }
        let mut row = vec![F::zero(); m + 1];
        row[m] = F::one();
        lp.add(row, Relation::Le, F::one());
        match lp.solve(self.eps) {
            LpOutcome::Optimal { value, x } if value.sign(self.eps) == Sign::Positive => {
                let w = x[..m].to_vec();
                if !F::EXACT && !self.verify_witness(subset, &w) {
                    return None;
                }
                Some((w, value))
            }
            _ => None,
        }
    }

    /// Substitution check of the equality/strict pattern with tolerance.
    fn verify_witness(&self, subset: &[usize], x: &[F]) -> bool {
        let norm = x.iter().fold(0.0, |a, v| libm::fmax(a, libm::fabs(v.to_f64())));
        let tol = self.eps * libm::fmax(1.0, norm) * libm::fmax(1.0, self.alpha.max_abs());
        (0..self.num_facets()).all(|s| {
            let v = dot(self.alpha.row(s), x).to_f64();
            if subset.contains(&s) {
                libm::fabs(v) <= tol
            } else {
                v < -tol
            }
        })
    }

    /// Condition (ii): the mixed equality/strict system is solvable.
    ///
    /// The full facet set is answered with the empty face (witness `0`, dim `-1`).
    pub fn defines_face(&self, subset: &[usize]) -> Option<FaceDescriptor<F>> {
        let mut facets = subset.to_vec();
        facets.sort_unstable();
        facets.dedup();
        let (witness, t) = self.face_program(&facets)?;
        Some(self.describe(facets, witness, t.to_f64()))
    }

    /// Condition (iii): maximize `sum_{s not in S'} X_s` over `sum X_s alpha_s = 0`,
    /// `X_s >= 0` off `S'`, capped at 1. The subset defines a face iff the
    /// optimum is zero.
    pub fn defines_face_dual(&self, subset: &[usize]) -> bool {
        let n = self.num_facets();
        let m = self.ambient_dim();
        let free: Vec<bool> = (0..n).map(|s| subset.contains(&s)).collect();
        let obj: Vec<F> = (0..n).map(|s| if free[s] { F::zero() } else { F::one() }).collect();
        let mut lp = LinearProgram::new(free.clone(), obj.clone());
        for j in 0..m {
            lp.add((0..n).map(|s| self.alpha[(s, j)].clone()).collect(), Relation::Eq, F::zero());
        }
        lp.add(obj, Relation::Le, F::one());
        match lp.solve(self.eps) {
            LpOutcome::Optimal { value, .. } => value.sign(self.eps) == Sign::Zero,
            _ => false,
        }
    }

    fn describe(&self, facets: Vec<usize>, witness: Vec<F>, margin: f64) -> FaceDescriptor<F> {
        let alpha_rank = self.alpha_rank(&facets);
        let dim = self.dim() as i64 - alpha_rank as i64;
        let link = self.cartan.restrict(&facets);
        let type_tag = link.classify_type();
        let kind = classify_kind(&link, &type_tag, alpha_rank);
        FaceDescriptor { facets, witness, dim, alpha_rank, link, type_tag, kind, margin }
    }

    /// Re-derives the classification of a face.
    pub fn classify_face(&self, face: &FaceDescriptor<F>) -> FaceKind {
        let link = self.cartan.restrict(&face.facets);
        let tag = link.classify_type();
        classify_kind(&link, &tag, self.alpha_rank(&face.facets))
    }

    /// All nonempty faces, including the interior (`S_f` empty), sorted by
    /// `|S_f|` then lexicographically.
    pub fn enumerate_faces(&self, max_facets: usize) -> Result<Vec<FaceDescriptor<F>>, PolytopeError> {
        let n = self.num_facets();
        if n > max_facets || n > 30 {
            return Err(PolytopeError::TooManyFacets { n, cap: max_facets.min(30) });
        }
        Ok(subsets_by_size(n)
            .into_iter()
            .filter(|s| s.len() < n)
            .filter_map(|s| self.defines_face(&s))
            .collect())
    }

    /// Vertices: faces with `rank{alpha_s : s in S_f} = d`.
    pub fn vertices(&self, max_facets: usize) -> Result<Vec<FaceDescriptor<F>>, PolytopeError> {
        let n = self.num_facets();
        if n > max_facets || n > 30 {
            return Err(PolytopeError::TooManyFacets { n, cap: max_facets.min(30) });
        }
        let d = self.dim();
        Ok(subsets_by_size(n)
            .into_iter()
            .filter(|s| s.len() >= d && s.len() < n && self.alpha_rank(s) == d)
            .filter_map(|s| self.defines_face(&s))
            .collect())
    }

    /// Link `P_f` in `V / Span f`, with Cartan matrix `A_{S_f}`.
    pub fn link(&self, face: &FaceDescriptor<F>) -> Result<CoxeterPolytope<F>, PolytopeError> {
        if face.facets.is_empty() {
            return Err(PolytopeError::Precondition("link needs a proper face with S_f nonempty"));
        }
        let sub = self.alpha.select_rows(&face.facets);
        let (_, pivots) = sub.transpose().rref(self.eps);
        let basis_rows: Vec<usize> = pivots.iter().map(|&p| face.facets[p]).collect();
        let b = self.alpha.select_rows(&basis_rows);
        let gram_inv = b.mul(&b.transpose()).inverse(self.eps).ok_or(PolytopeError::Consistency("link basis"))?;
        let coeff = sub.mul(&b.transpose()).mul(&gram_inv);
        let proj = self.polar.select_rows(&face.facets).mul(&b.transpose());
        Ok(CoxeterPolytope::from_parts(coeff, proj, self.eps))
    }

    /// Faces defined by `T1 + T2^0`,
    /// `T1 + T2^0 + T2^+` and `T1 + T2^0 + T2^-`.
    pub fn bigger_face(&self, t1: &[usize], t2: &[usize]) -> Result<[FaceDescriptor<F>; 3], PolytopeError> {
        if t1.iter().any(|s| t2.contains(s)) {
            return Err(PolytopeError::Precondition("T1 and T2 must be disjoint"));
        }
        let orth = t1.iter().all(|&s| t2.iter().all(|&t| self.cartan.entry(s, t).is_zero_eps(self.eps)));
        if !orth {
            return Err(PolytopeError::Precondition("T1 must be orthogonal to T2"));
        }
        let union: Vec<usize> = t1.iter().chain(t2).copied().collect();
        if self.defines_face(&union).is_none() {
            return Err(PolytopeError::Precondition("T1 + T2 must define a face"));
        }
        let (plus, zero, minus) = self.cartan.split_by_type(t2);
        let make = |extra: &[usize]| {
            let s: Vec<usize> = t1.iter().chain(zero.iter()).chain(extra).copied().collect();
            self.defines_face(&s).ok_or(PolytopeError::Consistency("bigger face lemma failed"))
        };
        Ok([make(&[])?, make(&plus)?, make(&minus)?])
    }

    /// Finest splitting of `V` compatible with the block structure of `A_P`.
    pub fn decompose(&self) -> Decomposition<F> {
        let (blocks, factors, embeddings) = self.split_recursive();
        if blocks.len() <= 1 {
            Decomposition::Indecomposable
        } else {
            Decomposition::Join(JoinStructure { blocks, factors, embeddings })
        }
    }

    #[allow(clippy::type_complexity)]
    fn split_recursive(&self) -> (Vec<Vec<usize>>, Vec<CoxeterPolytope<F>>, Vec<Matrix<F>>) {
        let comps = self.cartan.irreducible_components();
        let k = comps.len();
        let all: Vec<usize> = (0..self.num_facets()).collect();
        if k > 1 && k <= 16 {
            for group in subsets_by_size(k) {
                if group.is_empty() || group.len() == k || group.len() * 2 > k {
                    continue;
                }
                let g: Vec<usize> = group.iter().flat_map(|&c| comps[c].iter().copied()).collect::<Vec<_>>();
                let mut g = g;
                g.sort_unstable();
                let rest: Vec<usize> = all.iter().copied().filter(|s| !g.contains(s)).collect();
                let u_g = self.alpha.select_rows(&rest).kernel(self.eps);
                let u_r = self.alpha.select_rows(&g).kernel(self.eps);
                if u_g.len() + u_r.len() != self.ambient_dim() || u_g.is_empty() || u_r.is_empty() {
                    continue;
                }
                let e_g = Matrix::from_rows(&u_g).transpose();
                let e_r = Matrix::from_rows(&u_r).transpose();
                let p_g = self.restrict_to(&g, &e_g);
                let p_r = self.restrict_to(&rest, &e_r);
                let mut out: (Vec<Vec<usize>>, Vec<CoxeterPolytope<F>>, Vec<Matrix<F>>) = (Vec::new(), Vec::new(), Vec::new());
                for (facets, p, e) in [(g, p_g, e_g), (rest, p_r, e_r)] {
                    let (bs, fs, es) = p.split_recursive();
                    for ((b, f), sub_e) in bs.into_iter().zip(fs).zip(es) {
                        out.0.push(b.iter().map(|&i| facets[i]).collect());
                        out.1.push(f);
                        out.2.push(e.mul(&sub_e));
                    }
                }
                let mut order: Vec<usize> = (0..out.0.len()).collect();
                order.sort_by(|&a, &b| out.0[a][0].cmp(&out.0[b][0]));
                return (
                    order.iter().map(|&i| out.0[i].clone()).collect(),
                    order.iter().map(|&i| out.1[i].clone()).collect(),
                    order.iter().map(|&i| out.2[i].clone()).collect(),
                );
            }
        }
        (vec![all], vec![self.clone()], vec![Matrix::identity(self.ambient_dim())])
    }

    /// The factor on `facets` inside the subspace spanned by the columns of `e`.
    fn restrict_to(&self, facets: &[usize], e: &Matrix<F>) -> CoxeterPolytope<F> {
        let alpha = self.alpha.select_rows(facets).mul(e);
        let et = e.transpose();
        let pinv = et.mul(e).inverse(self.eps).expect("basis is independent").mul(&et);
        let polar = pinv.mul(&self.polar.select_rows(facets).transpose()).transpose();
        CoxeterPolytope::from_parts(alpha, polar, self.eps)
    }

    /// `P (x) Q` in `V_P + V_Q`.
    pub fn join(&self, other: &CoxeterPolytope<F>) -> CoxeterPolytope<F> {
        let (m1, m2) = (self.ambient_dim(), other.ambient_dim());
        let (n1, n2) = (self.num_facets(), other.num_facets());
        let embed = |mat: &Matrix<F>, n: usize, off_row: usize, off_col: usize, out: &mut Matrix<F>| {
            for s in 0..n {
                for j in 0..mat.cols() {
                    out[(off_row + s, off_col + j)] = mat[(s, j)].clone();
                }
            }
        };
        let mut alpha = Matrix::zeros(n1 + n2, m1 + m2);
        let mut polar = Matrix::zeros(n1 + n2, m1 + m2);
        embed(&self.alpha, n1, 0, 0, &mut alpha);
        embed(&other.alpha, n2, n1, m1, &mut alpha);
        embed(&self.polar, n1, 0, 0, &mut polar);
        embed(&other.polar, n2, n1, m1, &mut polar);
        let eps = if F::EXACT { 0.0 } else { libm::fmax(self.eps, other.eps) };
        CoxeterPolytope::from_parts(alpha, polar, eps)
    }

    pub fn is_perfect(&self, max_facets: usize) -> Result<PredicateResult<F>, PolytopeError> {
        self.scan_vertices(max_facets, |k| k == FaceKind::Elliptic)
    }

    pub fn is_quasiperfect(&self, max_facets: usize) -> Result<PredicateResult<F>, PolytopeError> {
        self.scan_vertices(max_facets, |k| k == FaceKind::Elliptic || k.is_parabolic())
    }

    /// Every vertex link is perfect.
    pub fn is_2perfect(&self, max_facets: usize) -> Result<PredicateResult<F>, PolytopeError> {
        for v in self.vertices(max_facets)? {
            if v.facets.is_empty() {
                continue;
            }
            let link = self.link(&v)?;
            if !link.is_perfect(max_facets)?.holds {
                return Ok(PredicateResult { holds: false, certificate: Some(v) });
            }
        }
        Ok(PredicateResult { holds: true, certificate: None })
    }

    fn scan_vertices(&self, max_facets: usize, ok: impl Fn(FaceKind) -> bool) -> Result<PredicateResult<F>, PolytopeError> {
        for v in self.vertices(max_facets)? {
            if !ok(v.kind) {
                return Ok(PredicateResult { holds: false, certificate: Some(v) });
            }
        }
        Ok(PredicateResult { holds: true, certificate: None })
    }

    /// Does every `v_s` lie in the span, and does the span have full rank?
    pub fn polar_rank(&self) -> usize {
        self.polar.rank(self.eps)
    }

    /// Is `x` in the closed cone `Delta` (with tolerance)?
    pub fn contains(&self, x: &[F]) -> bool {
        (0..self.num_facets()).all(|s| dot(self.alpha.row(s), x).sign(self.eps) != Sign::Positive)
    }

    /// Dimension of the kernel common to all covectors.
    pub fn common_kernel_dim(&self) -> usize {
        self.ambient_dim() - rank_of(&self.alpha.to_rows(), self.ambient_dim(), self.eps)
    }
}

fn trivial_cartan<F: Scalar>(n: usize, eps: f64) -> CartanMatrix<F> {
    CartanMatrix::new(Matrix::identity(n).scale(&F::from_i64(2)), eps).expect("diagonal Cartan matrix")
}

fn classify_kind<F: Scalar>(link: &CartanMatrix<F>, tag: &TypeTag, alpha_rank: usize) -> FaceKind {
    match tag.overall {
        MatrixType::Positive => FaceKind::Elliptic,
        MatrixType::Zero => {
            let d_f = alpha_rank as i64 - 1;
            FaceKind::ZeroType { parabolic: link.size() > 0 && link.rank() as i64 == d_f }
        }
        MatrixType::Negative => FaceKind::NegativeType { loxodromic: link.rank() == alpha_rank },
        MatrixType::Mixed => FaceKind::Mixed,
    }
}

/// Polytope in either arithmetic mode.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyPolytope {
    Exact(CoxeterPolytope<crate::scalar::Rational>),
    Approx(CoxeterPolytope<f64>),
}

impl AnyPolytope {
    pub fn mode(&self) -> crate::scalar::Mode {
        match self {
            AnyPolytope::Exact(_) => crate::scalar::Mode::Exact,
            AnyPolytope::Approx(_) => crate::scalar::Mode::Approx,
        }
    }

    pub fn to_f64(&self) -> CoxeterPolytope<f64> {
        match self {
            AnyPolytope::Exact(p) => p.to_f64(),
            AnyPolytope::Approx(p) => p.clone(),
        }
    }

    pub fn num_facets(&self) -> usize {
        match self {
            AnyPolytope::Exact(p) => p.num_facets(),
            AnyPolytope::Approx(p) => p.num_facets(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyPolytope::Exact(p) => p.dim(),
            AnyPolytope::Approx(p) => p.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn qrows(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn cartan(rows: &[&[i64]]) -> CartanMatrix<Rational> {
        CartanMatrix::from_rows(&qrows(rows), 0.0).unwrap()
    }

    /// Euclidean square `|x|, |y| <= z` with reflections in its sides.
    fn square() -> CoxeterPolytope<Rational> {
        let alphas = qrows(&[&[1, 0, -1], &[0, 1, -1], &[-1, 0, -1], &[0, -1, -1]]);
        let polars = qrows(&[&[2, 0, 0], &[0, 2, 0], &[-2, 0, 0], &[0, -2, 0]]);
        CoxeterPolytope::new(alphas, polars, 0.0).unwrap()
    }

    #[test]
    fn build_rejects_duplicate_facet() {
        let alphas = qrows(&[&[1, 0], &[1, 0], &[0, 1]]);
        let polars = qrows(&[&[2, 0], &[2, 0], &[0, 2]]);
        assert_eq!(CoxeterPolytope::new(alphas, polars, 0.0), Err(PolytopeError::RedundantFacet(0)));
    }

    #[test]
    fn build_rejects_bad_normalization_and_non_reduced() {
        let err = CoxeterPolytope::new(qrows(&[&[1, 0]]), qrows(&[&[1, 0]]), 0.0).unwrap_err();
        assert!(matches!(err, PolytopeError::Normalization { s: 0, .. }));
        let err = CoxeterPolytope::new(qrows(&[&[1, 0]]), qrows(&[&[2, 0]]), 0.0).unwrap_err();
        assert_eq!(err, PolytopeError::NotReduced(1));
    }

    #[test]
    fn square_faces() {
        let p = square();
        let faces = p.enumerate_faces(DEFAULT_MAX_FACETS).unwrap();
        assert_eq!(faces.len(), 9);
        assert!(p.defines_face(&[0, 2]).is_none());
        assert!(!p.defines_face_dual(&[0, 2]));
        assert_eq!(p.decompose(), Decomposition::Indecomposable);
        let v = p.defines_face(&[0, 1]).unwrap();
        assert_eq!(v.dim, 0);
        assert_eq!(v.kind, FaceKind::Elliptic);
    }

    #[test]
    fn tits_simplex_faces() {
        let p = CoxeterPolytope::tits(&cartan(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]));
        let faces = p.enumerate_faces(DEFAULT_MAX_FACETS).unwrap();
        assert_eq!(faces.len(), 7);
        let v = p.defines_face(&[1, 2]).unwrap();
        assert_eq!(v.witness.iter().filter(|x| x.sign(0.0) != Sign::Zero).count(), 1);
        assert!(v.kind.is_parabolic());
        assert!(p.is_quasiperfect(16).unwrap().holds);
        assert!(!p.is_perfect(16).unwrap().holds);
        let link = p.link(&v).unwrap();
        assert_eq!(link.cartan().matrix(), &Matrix::from_rows(&qrows(&[&[2, -2], &[-2, 2]])));
        assert_eq!(link.dim(), 1);
    }

    #[test]
    fn product_six_vertex_is_loxodromic() {
        let p = CoxeterPolytope::tits(&cartan(&[&[2, -1, 0], &[-1, 2, -3], &[0, -2, 2]]));
        let q = p.is_quasiperfect(16).unwrap();
        assert!(!q.holds);
        let cert = q.certificate.unwrap();
        assert_eq!(cert.facets, vec![1, 2]);
        assert_eq!(cert.kind, FaceKind::NegativeType { loxodromic: true });
    }

    #[test]
    fn join_and_decompose_roundtrip() {
        let seg = CoxeterPolytope::tits(&cartan(&[&[2, -3], &[-3, 2]]));
        let j = seg.join(&seg);
        assert_eq!(j.dim(), 3);
        match j.decompose() {
            Decomposition::Join(js) => {
                assert_eq!(js.blocks, vec![vec![0, 1], vec![2, 3]]);
                for f in &js.factors {
                    assert_eq!(f.cartan().matrix(), seg.cartan().matrix());
                }
            }
            Decomposition::Indecomposable => panic!("join must decompose"),
        }
    }

    #[test]
    fn bigger_face_parabolic_vertex() {
        let p = CoxeterPolytope::tits(&cartan(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]));
        let [a, b, c] = p.bigger_face(&[], &[1, 2]).unwrap();
        assert_eq!(a.facets, vec![1, 2]);
        assert_eq!(b.facets, vec![1, 2]);
        assert_eq!(c.facets, vec![1, 2]);
    }
}
