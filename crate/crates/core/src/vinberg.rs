//! The Vinberg representation: reflections, orbits and the tiled domain.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::cartan::{MatrixType, Order};
use crate::eigen::inertia;
use crate::geometry::Chart;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::matrix::{dot, norm_f64, rank_of, Matrix};
use crate::polytope::{CoxeterPolytope, PolytopeError};
use crate::scalar::{Scalar, Sign};

/// `sigma_s = Id - v_s alpha_s`, acting on column vectors.
pub fn reflection<F: Scalar>(p: &CoxeterPolytope<F>, s: usize) -> Matrix<F> {
    let m = p.ambient_dim();
    let (a, v) = (p.alpha(s), p.polar(s));
    Matrix::from_fn(m, m, |i, j| {
        let id = if i == j { F::one() } else { F::zero() };
        id - v[i].clone() * a[j].clone()
    })
}

pub fn reflections<F: Scalar>(p: &CoxeterPolytope<F>) -> Vec<Matrix<F>> {
    (0..p.num_facets()).map(|s| reflection(p, s)).collect()
}

fn is_identity<F: Scalar>(m: &Matrix<F>, tol: f64) -> bool {
    let n = m.rows();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = if i == j { m[(i, j)].clone() - F::one() } else { m[(i, j)].clone() };
            e.sign(tol) == Sign::Zero
        })
    })
}

/// Outcome of the relation check for one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairRelation {
    pub s: usize,
    pub t: usize,
    pub order: Order,
    /// `false` when `m_st` exceeds the cap and the pair was skipped.
    pub checked: bool,
}

/// `(sigma_s sigma_t)^j` misbehaves.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("relation for pair ({s}, {t}) fails at power {j}")]
pub struct RelationFailure {
    pub s: usize,
    pub t: usize,
    pub j: u32,
}

/// Verifies `(sigma_s sigma_t)^{m_st} = Id` with no earlier identity, and
/// `(sigma_s sigma_t)^j != Id` for `j <= cap` when `m_st` is infinite.
pub fn check_relations<F: Scalar>(p: &CoxeterPolytope<F>, cap: u32) -> Result<Vec<PairRelation>, RelationFailure> {
    let refl = reflections(p);
    let n = p.num_facets();
    let tol = if F::EXACT { 0.0 } else { 10.0 * p.eps() };
    let mut out = Vec::new();
    for s in 0..n {
        if !is_identity(&refl[s].mul(&refl[s]), tol) {
            return Err(RelationFailure { s, t: s, j: 2 });
        }
        for t in s + 1..n {
            let order = p.cartan().order(s, t);
            let limit = match order {
                Order::Finite(m) if m <= cap => m,
                Order::Finite(_) => {
                    out.push(PairRelation { s, t, order, checked: false });
                    continue;
                }
                Order::Infinite => cap,
            };
            let st = refl[s].mul(&refl[t]);
            let mut power = st.clone();
            for j in 1..=limit {
                let scale = libm::fmax(1.0, power.max_abs());
                let id = is_identity(&power, tol * scale);
                let expected = matches!(order, Order::Finite(m) if m == j);
                if id != expected {
                    return Err(RelationFailure { s, t, j });
                }
                power = power.mul(&st);
            }
            out.push(PairRelation { s, t, order, checked: true });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error("near-equal but distinct matrices at level {level}: element {a} vs {b} (difference {diff:e})")]
    Ambiguous { level: usize, a: usize, b: usize, diff: f64 },
}

struct ExactKey<F>(Vec<F>);

impl<F: Scalar> PartialEq for ExactKey<F> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<F: Scalar> Eq for ExactKey<F> {}
impl<F: Scalar> PartialOrd for ExactKey<F> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<F: Scalar> Ord for ExactKey<F> {
    fn cmp(&self, o: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&o.0) {
            let c = a.total_cmp(b);
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct ProjKey(f64);
impl Eq for ProjKey {}
impl PartialOrd for ProjKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for ProjKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Dedup index: exact keys, or a sorted weighted projection searched in a
/// window for the float case.
enum Index<F> {
    Exact(BTreeMap<ExactKey<F>, usize>),
    Approx { map: BTreeMap<ProjKey, Vec<usize>>, eps: f64, weights: Vec<f64> },
}

enum Lookup {
    Found(usize),
    Missing,
    Ambiguous(usize, f64),
}

impl<F: Scalar> Index<F> {
    fn new(size: usize, eps: f64) -> Self {
        if F::EXACT {
            Index::Exact(BTreeMap::new())
        } else {
            let weights = (0..size).map(|k| 1.0 / (1.0 + k as f64 * 0.618_033_988_75)).collect();
            Index::Approx { map: BTreeMap::new(), eps, weights }
        }
    }

    fn quantum(eps: f64, m: &Matrix<F>) -> f64 {
        10.0 * eps * libm::fmax(1.0, m.max_abs())
    }

    fn project(weights: &[f64], m: &Matrix<F>) -> f64 {
        m.data().iter().zip(weights).map(|(x, w)| x.to_f64() * w).sum()
    }

    fn lookup(&self, m: &Matrix<F>, elements: &[Matrix<F>]) -> Lookup {
        match self {
            Index::Exact(map) => match map.get(&ExactKey(m.data().to_vec())) {
                Some(&i) => Lookup::Found(i),
                None => Lookup::Missing,
            },
            Index::Approx { map, eps, weights } => {
                let q = Self::quantum(*eps, m);
                let wsum: f64 = weights.iter().sum();
                let p = Self::project(weights, m);
                let reach = 100.0 * q * wsum;
                let mut found = None;
                for (_, ids) in map.range(ProjKey(p - reach)..=ProjKey(p + reach)) {
                    for &i in ids {
                        let diff = elements[i].max_abs_diff(m);
                        if diff <= q {
                            found = Some(i);
                        } else if diff <= 100.0 * q {
                            return Lookup::Ambiguous(i, diff);
                        }
                    }
                }
                found.map_or(Lookup::Missing, Lookup::Found)
            }
        }
    }

    fn insert(&mut self, m: &Matrix<F>, id: usize) {
        match self {
            Index::Exact(map) => {
                map.insert(ExactKey(m.data().to_vec()), id);
            }
            Index::Approx { map, weights, .. } => {
                let p = Self::project(weights, m);
                map.entry(ProjKey(p)).or_default().push(id);
            }
        }
    }
}

/// Distinct group elements of word length at most `depth`, found breadth first.
pub struct OrbitTiling<F> {
    polytope: CoxeterPolytope<F>,
    depth: usize,
    elements: Vec<Matrix<F>>,
    inverses: Vec<Matrix<F>>,
    /// `(parent, generator)`: `elements[i] = elements[parent] * sigma_generator`.
    parents: Vec<Option<(usize, usize)>>,
    levels: Vec<usize>,
    level_sizes: Vec<usize>,
    index: Index<F>,
}

impl<F: Scalar> core::fmt::Debug for OrbitTiling<F> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("OrbitTiling").field("depth", &self.depth).field("level_sizes", &self.level_sizes).finish()
    }
}

/// Breadth-first enumeration with full dedup.
pub fn expand_orbit<F: Scalar>(p: &CoxeterPolytope<F>, depth: usize) -> Result<OrbitTiling<F>, OrbitError> {
    let m = p.ambient_dim();
    let refl = reflections(p);
    let id = Matrix::identity(m);
    let mut index = Index::new(m * m, p.eps());
    index.insert(&id, 0);
    let mut t = OrbitTiling {
        polytope: p.clone(),
        depth,
        elements: vec![id.clone()],
        inverses: vec![id],
        parents: vec![None],
        levels: vec![0],
        level_sizes: vec![1],
        index: Index::new(0, 0.0),
    };
    let mut start = 0;
    for level in 1..=depth {
        let end = t.elements.len();
        let mut added = 0;
        for parent in start..end {
            for (g, r) in refl.iter().enumerate() {
                let child = t.elements[parent].mul(r);
                match index.lookup(&child, &t.elements) {
                    Lookup::Found(_) => {}
                    Lookup::Ambiguous(other, diff) => {
                        return Err(OrbitError::Ambiguous { level, a: t.elements.len(), b: other, diff });
                    }
                    Lookup::Missing => {
                        let k = t.elements.len();
                        index.insert(&child, k);
                        t.inverses.push(r.mul(&t.inverses[parent]));
                        t.elements.push(child);
                        t.parents.push(Some((parent, g)));
                        t.levels.push(level);
                        added += 1;
                    }
                }
            }
        }
        t.level_sizes.push(added);
        start = end;
        if added == 0 {
            // Saturated: the group is finite and fully enumerated.
            t.level_sizes.resize(depth + 1, 0);
            break;
        }
    }
    t.index = index;
    Ok(t)
}

impl<F: Scalar> OrbitTiling<F> {
    pub fn polytope(&self) -> &CoxeterPolytope<F> {
        &self.polytope
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Matrix<F>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix<F> {
        &self.elements[i]
    }

    pub fn inverse(&self, i: usize) -> &Matrix<F> {
        &self.inverses[i]
    }

    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        self.parents[i]
    }

    /// Word length of element `i`.
    pub fn level(&self, i: usize) -> usize {
        self.levels[i]
    }

    /// Number of new elements at each word length `0..=depth`.
    pub fn level_sizes(&self) -> &[usize] {
        &self.level_sizes
    }

    /// Generators spelling element `i`, leftmost first.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, g)) = self.parents[i] {
            w.push(g);
            i = p;
        }
        w.reverse();
        w
    }

    /// Index of `g` in the tiling, if present.
    pub fn find(&self, g: &Matrix<F>) -> Option<usize> {
        match self.index.lookup(g, &self.elements) {
            Lookup::Found(i) => Some(i),
            _ => None,
        }
    }

    /// Covectors of `gamma_i Delta` as rows: `alpha_s o gamma_i^{-1}`.
    pub fn tile_covectors(&self, i: usize) -> Matrix<F> {
        self.polytope.alphas().mul(&self.inverses[i])
    }

    /// Tile facets `(tile, s)` whose neighbour `gamma sigma_s` is not in the tiling.
    pub fn frontier(&self) -> Vec<(usize, usize)> {
        let refl = reflections(&self.polytope);
        let mut out = Vec::new();
        for i in 0..self.len() {
            for (s, r) in refl.iter().enumerate() {
                if self.find(&self.elements[i].mul(r)).is_none() {
                    out.push((i, s));
                }
            }
        }
        out
    }

    /// Elements of word length at most `n`.
    pub fn truncated(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.levels[i] <= n)
    }
}

/// Dimensions and flags of the representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationReport {
    /// `dim V_alpha`, the common kernel of the covectors.
    pub v_alpha_dim: usize,
    /// `dim V_v`, the span of the polars.
    pub v_v_dim: usize,
    pub cartan_rank: usize,
    pub ambient_dim: usize,
    pub reduced: bool,
    pub dual_reduced: bool,
    pub irreducible: bool,
    /// `rank A = d + 1`.
    pub full_rank: bool,
}

pub fn representation_report<F: Scalar>(p: &CoxeterPolytope<F>) -> RepresentationReport {
    let m = p.ambient_dim();
    let v_alpha_dim = m - rank_of(&p.alphas().to_rows(), m, p.eps());
    let v_v_dim = rank_of(&p.polars().to_rows(), m, p.eps());
    let cartan_rank = p.cartan().rank();
    let reduced = v_alpha_dim == 0;
    let dual_reduced = v_v_dim == m;
    RepresentationReport {
        v_alpha_dim,
        v_v_dim,
        cartan_rank,
        ambient_dim: m,
        reduced,
        dual_reduced,
        irreducible: reduced && dual_reduced,
        full_rank: cartan_rank == m,
    }
}

/// The bilinear form `B` with `B(v_s, v_t) = A_st`, when `A` is symmetric and
/// the polars span `V`: `B = (V^+)^T A V^+` for the polar matrix `V`.
pub fn invariant_form<F: Scalar>(p: &CoxeterPolytope<F>) -> Option<Matrix<F>> {
    let a = p.cartan();
    if !a.is_symmetric() || a.rank() != p.ambient_dim() {
        return None;
    }
    // Columns of `vmat` are the polars; pinv = (V^T V)^{-1}... use V^+ = V^T (V V^T)^{-1}.
    let vmat = p.polars().transpose();
    let vvt = vmat.mul(&vmat.transpose());
    let vvt_inv = vvt.inverse(p.eps())?;
    let pinv = vmat.transpose().mul(&vvt_inv);
    let b = pinv.transpose().mul(a.matrix()).mul(&pinv);
    // Must reproduce A on the polars.
    let back = p.polars().mul(&b).mul(&vmat);
    let tol = if F::EXACT { 0.0 } else { 1e3 * p.eps() * libm::fmax(1.0, a.matrix().max_abs()) };
    if back.max_abs_diff(a.matrix()) > tol {
        return None;
    }
    Some(b)
}

/// Covector `psi = sum Y_s alpha_s` for the left Perron vector `Y` of `A`,
/// which is negative on `Delta` and on every polar when `A` has nonpositive
/// Perron eigenvalue.
pub fn perron_covector<F: Scalar>(p: &CoxeterPolytope<F>) -> Vec<f64> {
    let pf = p.to_f64();
    let (y, _) = pf.cartan().left_perron();
    let m = pf.ambient_dim();
    let mut psi = vec![0.0; m];
    for (s, ys) in y.iter().enumerate() {
        for (k, a) in pf.alpha(s).iter().enumerate() {
            psi[k] += ys * a;
        }
    }
    psi
}

/// Union of tiles up to depth `N`, seen in the chart of the Perron covector.
#[derive(Clone, Debug)]
pub struct DomainApprox {
    pub depth: usize,
    pub chart: Chart,
    /// Covectors of each tile (rows), in `V`.
    pub tiles: Vec<Matrix<f64>>,
    /// Vertex rays of each tile, in `V`.
    pub tile_vertices: Vec<Vec<Vec<f64>>>,
    /// `(tile, facet, covector)` of facets with no neighbour in the tiling.
    pub frontier: Vec<(usize, usize, Vec<f64>)>,
    /// Invariant form whose negative cone is the exact domain, when known.
    pub quadric: Option<Matrix<f64>>,
}

/// Vertex rays of `Delta`, as `f64` witnesses.
pub fn vertex_rays<F: Scalar>(p: &CoxeterPolytope<F>) -> Result<Vec<Vec<f64>>, PolytopeError> {
    Ok(p
        .vertices(crate::polytope::DEFAULT_MAX_FACETS)?
        .into_iter()
        .map(|v| {
            let mut x: Vec<f64> = v.witness.iter().map(|c| c.to_f64()).collect();
            let n = norm_f64(&x);
            x.iter_mut().for_each(|c| *c /= n);
            x
        })
        .collect())
}

/// The exact domain as a quadric cone, when `A` is symmetric of signature
/// `(d, 1)` and `Delta` lies in the closed negative cone of the form.
pub fn quadric_domain<F: Scalar>(p: &CoxeterPolytope<F>) -> Option<Matrix<f64>> {
    let b = invariant_form(p)?.to_f64();
    let d = p.dim();
    if inertia(&b, 1e-10) != (d, 1, 0) {
        return None;
    }
    let rays = vertex_rays(p).ok()?;
    let interior = p.defines_face(&[])?.witness.iter().map(|c| c.to_f64()).collect::<Vec<_>>();
    let q = |x: &[f64]| dot(x, &b.mul_vec(x));
    if !(q(&interior) < 0.0) {
        return None;
    }
    let tol = 1e-9 * libm::fmax(1.0, b.max_abs());
    if rays.iter().any(|r| q(r) > tol) {
        return None;
    }
    Some(b)
}

/// Builds the tiled approximation and its frontier.
pub fn domain_approx<F: Scalar>(tiling: &OrbitTiling<F>) -> Result<DomainApprox, PolytopeError> {
    let p = tiling.polytope();
    let rays = vertex_rays(p)?;
    let alpha = p.alphas().to_f64();
    let mut tiles = Vec::with_capacity(tiling.len());
    let mut tile_vertices = Vec::with_capacity(tiling.len());
    for i in 0..tiling.len() {
        let g = tiling.element(i).to_f64();
        tiles.push(alpha.mul(&tiling.inverse(i).to_f64()));
        tile_vertices.push(rays.iter().map(|r| g.mul_vec(r)).collect());
    }
    let frontier = tiling
        .frontier()
        .into_iter()
        .map(|(i, s)| (i, s, tiles[i].row_vec(s)))
        .collect();
    Ok(DomainApprox {
        depth: tiling.depth(),
        chart: Chart::new(&perron_covector(p)),
        tiles,
        tile_vertices,
        frontier,
        quadric: quadric_domain(p),
    })
}

impl DomainApprox {
    /// Chart images of the vertices of each tile (tiles leaving the chart are skipped).
    pub fn chart_tiles(&self) -> Vec<Vec<Vec<f64>>> {
        self.tile_vertices
            .iter()
            .filter_map(|vs| vs.iter().map(|v| self.chart.to_chart(v)).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Frontier vertex rays: vertices of tiles lying on a frontier facet.
    pub fn frontier_points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for (tile, _, cov) in &self.frontier {
            for v in &self.tile_vertices[*tile] {
                let scale = libm::fmax(1.0, norm_f64(cov) * norm_f64(v));
                if libm::fabs(dot(cov, v)) <= 1e-9 * scale {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// Largest `|B(x,x)| / (|x|^2 |B|)` over frontier points, when the quadric is known.
    pub fn frontier_quadric_margin(&self) -> Option<f64> {
        let b = self.quadric.as_ref()?;
        let bn = libm::fmax(1e-300, b.max_abs());
        Some(self.frontier_points().iter().fold(0.0, |m, x| {
            let nx = dot(x, x);
            libm::fmax(m, libm::fabs(dot(x, &b.mul_vec(x))) / (nx * bn))
        }))
    }
}

/// Evidence about proper convexity of the tiled domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Properness {
    ProperlyConvexEvidence,
    NotProperEvidence,
    Inconclusive,
}

impl Properness {
    pub fn as_str(self) -> &'static str {
        match self {
            Properness::ProperlyConvexEvidence => "properly-convex-evidence",
            Properness::NotProperEvidence => "not-proper-evidence",
            Properness::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProperReport {
    pub verdict: Properness,
    /// Best chart margin over tiles of depth `N` and `N / 2`.
    pub margin: f64,
    pub margin_half: f64,
    /// Whether the verdict agrees with the type of `A`.
    pub consistent_with_type: bool,
}

/// Best `t` with some `psi`, `|psi|_inf <= 1`, satisfying `psi(x) <= -t` on
/// all unit rays. Constraints are added lazily from the most violated ray.
pub fn chart_margin(rays: &[Vec<f64>]) -> f64 {
    if rays.is_empty() {
        return 0.0;
    }
    let m = rays[0].len();
    let mut active: Vec<usize> = Vec::new();
    let mut candidates: Vec<usize> = (0..rays.len()).collect();
    // Seed with a spread of rays.
    let step = (rays.len() / (2 * m)).max(1);
    for i in (0..rays.len()).step_by(step) {
        active.push(i);
    }
    candidates.retain(|i| !active.contains(i));
    for _ in 0..rays.len() + 1 {
        let mut obj = vec![0.0; m + 1];
        obj[m] = 1.0;
        let mut lp = LinearProgram::new(vec![true; m + 1], obj);
        for &i in &active {
            let mut row = rays[i].clone();
            row.push(1.0);
            lp.add(row, Relation::Le, 0.0);
        }
        for k in 0..m {
            let mut row = vec![0.0; m + 1];
            row[k] = 1.0;
            lp.add(row.clone(), Relation::Le, 1.0);
            lp.add(row, Relation::Ge, -1.0);
        }
        let (t, psi) = match lp.solve(1e-12) {
            LpOutcome::Optimal { value, x } => (value, x[..m].to_vec()),
            _ => return 0.0,
        };
        if t <= 0.0 {
            return 0.0;
        }
        let worst = candidates
            .iter()
            .map(|&i| (i, dot(&psi, &rays[i]) + t))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match worst {
            Some((i, v)) if v > 1e-12 => {
                active.push(i);
                candidates.retain(|&c| c != i);
            }
            _ => return t,
        }
    }
    0.0
}

fn margin_at<F: Scalar>(tiling: &OrbitTiling<F>, rays: &[Vec<f64>], n: usize) -> f64 {
    let mut pts: Vec<Vec<f64>> = Vec::new();
    for i in tiling.truncated(n) {
        let g = tiling.element(i).to_f64();
        for r in rays {
            let mut x = g.mul_vec(r);
            let nx = norm_f64(&x);
            x.iter_mut().for_each(|c| *c /= nx);
            pts.push(x);
        }
    }
    chart_margin(&pts)
}

/// Searches for an affine chart containing all tiles, comparing the margin
/// at depth `N` with the margin at depth `N / 2`.
pub fn check_properness<F: Scalar>(tiling: &OrbitTiling<F>) -> ProperReport {
    let p = tiling.polytope();
    let negative = p.cartan().classify_type().is(MatrixType::Negative);
    let n = tiling.depth();
    let rays = vertex_rays(p).unwrap_or_default();
    if n == 0 || rays.is_empty() {
        return ProperReport {
            verdict: Properness::Inconclusive,
            margin: 0.0,
            margin_half: 0.0,
            consistent_with_type: true,
        };
    }
    let margin = margin_at(tiling, &rays, n);
    let margin_half = margin_at(tiling, &rays, n / 2);
    let verdict = if margin <= 1e-9 {
        Properness::NotProperEvidence
    } else {
        let ratio = margin / margin_half;
        if ratio >= 0.9 {
            Properness::ProperlyConvexEvidence
        } else if ratio <= 0.75 {
            Properness::NotProperEvidence
        } else {
            Properness::Inconclusive
        }
    };
    let consistent_with_type = match verdict {
        Properness::ProperlyConvexEvidence => negative,
        Properness::NotProperEvidence => !negative,
        Properness::Inconclusive => true,
    };
    ProperReport { verdict, margin, margin_half, consistent_with_type }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanMatrix;
    use crate::scalar::Rational;

    fn tits_q(rows: &[&[i64]]) -> CoxeterPolytope<Rational> {
        let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect()).collect();
        CoxeterPolytope::tits(&CartanMatrix::from_rows(&rows, 0.0).unwrap())
    }

    #[test]
    fn a2_reflection_matrix() {
        let p = tits_q(&[&[2, -1], &[-1, 2]]);
        let s = reflection(&p, 0).to_f64();
        assert_eq!(s.to_rows(), vec![vec![-1.0, 0.0], vec![1.0, 1.0]]);
        let r = reflections(&p);
        for (k, m) in r.iter().enumerate() {
            assert!(is_identity(&m.mul(m), 0.0));
            let v = m.mul_vec(p.polar(k));
            assert_eq!(v, p.polar(k).iter().map(|x| -x.clone()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn a2_relations_and_orbit() {
        let p = tits_q(&[&[2, -1], &[-1, 2]]);
        let rel = check_relations(&p, 50).unwrap();
        assert_eq!(rel.len(), 1);
        assert!(rel[0].checked);
        for n in 3..6 {
            assert_eq!(expand_orbit(&p, n).unwrap().len(), 6);
        }
        assert_eq!(expand_orbit(&p, 0).unwrap().len(), 1);
    }

    #[test]
    fn b2_via_rational_conjugate() {
        let p = tits_q(&[&[2, -1], &[-2, 2]]);
        let t = expand_orbit(&p, 6).unwrap();
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn affine_a1_grows_linearly() {
        let p = tits_q(&[&[2, -2], &[-2, 2]]);
        let t = expand_orbit(&p, 6).unwrap();
        assert_eq!(t.level_sizes(), &[1, 2, 2, 2, 2, 2, 2]);
        let r = representation_report(&p);
        assert!(r.reduced && !r.dual_reduced && !r.irreducible && !r.full_rank);
        let pr = check_properness(&expand_orbit(&p, 10).unwrap());
        assert_eq!(pr.verdict, Properness::NotProperEvidence);
        assert!(pr.consistent_with_type);
    }

    #[test]
    fn ideal_triangle_growth_and_form() {
        let p = tits_q(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]);
        let rel = check_relations(&p, 50).unwrap();
        assert!(rel.iter().all(|r| r.checked));
        let t = expand_orbit(&p, 8).unwrap();
        let ls = t.level_sizes();
        assert!(ls.windows(2).all(|w| w[1] > w[0]));
        let b = invariant_form(&p).unwrap();
        for g in t.elements() {
            assert_eq!(g.transpose().mul(&b).mul(g), b);
        }
        let r = representation_report(&p);
        assert!(r.irreducible && r.full_rank);
    }

    #[test]
    fn word_spells_element() {
        let p = tits_q(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]);
        let t = expand_orbit(&p, 4).unwrap();
        let r = reflections(&p);
        for i in 0..t.len() {
            let mut g = Matrix::identity(3);
            for s in t.word(i) {
                g = g.mul(&r[s]);
            }
            assert_eq!(&g, t.element(i));
            assert!(is_identity(&g.mul(t.inverse(i)), 0.0));
        }
    }

    #[test]
    fn approx_dedup_matches_exact() {
        let p = tits_q(&[&[2, -1, 0], &[-1, 2, -2], &[0, -2, 2]]);
        let exact = expand_orbit(&p, 7).unwrap();
        let approx = expand_orbit(&p.to_f64(), 7).unwrap();
        assert_eq!(exact.level_sizes(), approx.level_sizes());
    }

    #[test]
    fn depth_zero_is_inconclusive() {
        let p = tits_q(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]);
        let t = expand_orbit(&p, 0).unwrap();
        assert_eq!(check_properness(&t).verdict, Properness::Inconclusive);
        let d = domain_approx(&t).unwrap();
        assert_eq!(d.tiles.len(), 1);
        assert_eq!(d.frontier.len(), 3);
    }
}
