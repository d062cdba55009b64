//! Proximal limit set, its convex hull, and the seed of the minimal domain.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::MatrixType;
use crate::eigen::{detect_proximal, Proximality, DEFAULT_GAP_EPS};
use crate::geometry::{convex_hull_2d, convex_hull_3d, hausdorff_polygons, Chart, Hull3};
use crate::matrix::{dot, norm_f64, Matrix};
use crate::polytope::{subsets_by_size, CoxeterPolytope, PolytopeError, DEFAULT_MAX_FACETS};
use crate::scalar::{Scalar, Sign};
use crate::vinberg::{domain_approx, expand_orbit, perron_covector, reflections, OrbitError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LimitSetError {
    #[error("the Cartan matrix is not of negative type")]
    NotNegativeType,
    #[error("the polars span a subspace of rank {rank} in dimension {dim}")]
    PolarsDoNotSpan { rank: usize, dim: usize },
    #[error("degenerate hull: affine rank {rank} in a chart of dimension {dim}")]
    Degenerate { rank: usize, dim: usize },
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// An attracting fixed point together with the element that certifies it.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitPoint {
    pub word: Vec<usize>,
    pub eigenvalue: f64,
    pub gap: f64,
    /// `|g x - lambda x| / |lambda|`.
    pub residual: f64,
    /// Unit vector in `V`, on the chart side (`psi < 0`).
    pub point: Vec<f64>,
    pub chart: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSetSample {
    pub points: Vec<LimitPoint>,
    pub word_length: usize,
    pub count: usize,
    pub seed: u64,
    /// Words whose top eigenvalue was not simple and dominant.
    pub rejected: usize,
    /// Near ties left undecided.
    pub indeterminate: usize,
    pub chart: Chart,
}

impl LimitSetSample {
    pub fn chart_points(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.chart.clone()).collect()
    }

    /// Largest `|B(x,x)| / |B|` over the sample, for unit `x`.
    pub fn quadric_residual(&self, b: &Matrix<f64>) -> f64 {
        let bn = libm::fmax(b.max_abs(), f64::MIN_POSITIVE);
        self.points.iter().fold(0.0, |m, p| libm::fmax(m, dot(&p.point, &b.mul_vec(&p.point)).abs() / bn))
    }
}

/// Random reduced word of length `len`.
fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Vec<usize> {
    let mut w = Vec::with_capacity(len);
    while w.len() < len {
        let s = rng.gen_range(0..n);
        if w.last() != Some(&s) {
            w.push(s);
        }
    }
    w
}

/// Word lengths concentrate at `L`, with a geometric tail towards shorter words.
fn word_length(rng: &mut ChaCha8Rng, max_len: usize) -> usize {
    let mut k = 0;
    while k + 1 < max_len && rng.gen_bool(0.5) {
        k += 1;
    }
    max_len - k
}

/// Attracting fixed points of `count` random words of length at most `max_len`
/// and of their cyclic rotations, deduplicated at `10 eps` in the chart.
pub fn sample_limit_set<F: Scalar>(
    p: &CoxeterPolytope<F>,
    max_len: usize,
    count: usize,
    seed: u64,
) -> Result<LimitSetSample, LimitSetError> {
    if !p.cartan().classify_type().is(MatrixType::Negative) {
        return Err(LimitSetError::NotNegativeType);
    }
    let pf = p.to_f64();
    let refl = reflections(&pf);
    let n = refl.len();
    let chart = Chart::new(&perron_covector(p));
    let res = 10.0 * pf.eps();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = LimitSetSample {
        points: Vec::new(),
        word_length: max_len,
        count,
        seed,
        rejected: 0,
        indeterminate: 0,
        chart: chart.clone(),
    };
    // Buckets on the first chart coordinate, for deduplication.
    let mut buckets: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for _ in 0..count {
        let len = word_length(&mut rng, max_len.max(1));
        let word = random_word(&mut rng, n, len);
        let product = |w: &[usize]| w.iter().fold(Matrix::identity(pf.ambient_dim()), |g, &s| g.mul(&refl[s]));
        let w = match detect_proximal(&product(&word), DEFAULT_GAP_EPS) {
            Proximality::Proximal(w) => w,
            Proximality::No => {
                out.rejected += 1;
                continue;
            }
            Proximality::Indeterminate => {
                out.indeterminate += 1;
                continue;
            }
        };
        // Cyclic rotations are conjugates: proximal too, with translated fixed points.
        for r in 0..word.len() {
            let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
            let w = if r == 0 {
                w.clone()
            } else {
                match detect_proximal(&product(&rotated), DEFAULT_GAP_EPS) {
                    Proximality::Proximal(w) => w,
                    _ => continue,
                }
            };
            push_point(&mut out, &mut buckets, &chart, res, rotated, &w);
        }
    }
    Ok(out)
}

fn push_point(
    out: &mut LimitSetSample,
    buckets: &mut BTreeMap<i64, Vec<usize>>,
    chart: &Chart,
    res: f64,
    word: Vec<usize>,
    w: &crate::eigen::ProximalWitness,
) {
    let mut x = w.point.clone();
    let side = dot(&x, chart.psi());
    if side.abs() <= 1e-12 {
        return;
    }
    if side > 0.0 {
        x.iter_mut().for_each(|c| *c = -*c);
    }
    let Some(y) = chart.to_chart(&x) else { return };
    let key = libm::floor(y[0] / res) as i64;
    let dup = (key - 1..=key + 1).any(|k| {
        buckets
            .get(&k)
            .is_some_and(|idx| idx.iter().any(|&i| out.points[i].chart.iter().zip(&y).all(|(a, b)| (a - b).abs() <= res)))
    });
    if dup {
        return;
    }
    buckets.entry(key).or_default().push(out.points.len());
    out.points.push(LimitPoint {
        word,
        eigenvalue: w.eigenvalue,
        gap: w.gap,
        residual: w.residual / w.eigenvalue.abs(),
        point: x,
        chart: y,
    });
}

/// Distance from the unit vector `x` to the span of the polars.
pub fn polar_span_residual<F: Scalar>(p: &CoxeterPolytope<F>, x: &[f64]) -> f64 {
    // Orthonormal basis of the polar span by Gram-Schmidt.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for r in p.polars().to_f64().to_rows() {
        let mut v = r;
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(a, e)| *a -= c * e);
        }
        let nv = norm_f64(&v);
        if nv > 1e-10 {
            basis.push(v.iter().map(|a| a / nv).collect());
        }
    }
    let mut rest = x.to_vec();
    for b in &basis {
        let c = dot(&rest, b);
        rest.iter_mut().zip(b).for_each(|(a, e)| *a -= c * e);
    }
    norm_f64(&rest) / libm::fmax(norm_f64(x), f64::MIN_POSITIVE)
}

/// Convex hull of a chart point cloud.
#[derive(Clone, Debug, PartialEq)]
pub enum LimitHull {
    Interval(f64, f64),
    /// Counterclockwise vertices.
    Polygon(Vec<[f64; 2]>),
    Polyhedron(Hull3),
}

fn affine_rank(points: &[Vec<f64>], tol: f64) -> usize {
    let Some(first) = points.first() else { return 0 };
    let rows: Vec<Vec<f64>> =
        points[1..].iter().map(|q| q.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::from_rows(&rows).rank(tol)
}

/// Hull of the sample in its chart.
pub fn hull_of_limit_set(sample: &LimitSetSample) -> Result<LimitHull, LimitSetError> {
    let pts = sample.chart_points();
    let dim = sample.chart.dim();
    let scale = pts.iter().fold(1.0, |m, p| libm::fmax(m, norm_f64(p)));
    let rank = affine_rank(&pts, 1e-9 * scale);
    if rank < dim {
        return Err(LimitSetError::Degenerate { rank, dim });
    }
    match dim {
        1 => {
            let lo = pts.iter().fold(f64::INFINITY, |m, p| libm::fmin(m, p[0]));
            let hi = pts.iter().fold(f64::NEG_INFINITY, |m, p| libm::fmax(m, p[0]));
            Ok(LimitHull::Interval(lo, hi))
        }
        2 => Ok(LimitHull::Polygon(convex_hull_2d(&pts.iter().map(|p| [p[0], p[1]]).collect::<Vec<_>>()))),
        3 => convex_hull_3d(&pts.iter().map(|p| [p[0], p[1], p[2]]).collect::<Vec<_>>(), 1e-12 * scale)
            .map(LimitHull::Polyhedron)
            .ok_or(LimitSetError::Degenerate { rank, dim }),
        d => Err(LimitSetError::Dimension(d)),
    }
}

/// Convex hull, in the chart of `sample`, of the tiles up to depth `n`.
pub fn tiled_hull<F: Scalar>(p: &CoxeterPolytope<F>, n: usize, chart: &Chart) -> Result<Vec<[f64; 2]>, LimitSetError> {
    if p.dim() != 2 {
        return Err(LimitSetError::Dimension(p.dim()));
    }
    let tiling = expand_orbit(&p.to_f64(), n)?;
    let approx = domain_approx(&tiling)?;
    let pts: Vec<[f64; 2]> = approx
        .tile_vertices
        .iter()
        .flatten()
        .filter_map(|v| chart.to_chart(v))
        .map(|y| [y[0], y[1]])
        .collect();
    Ok(convex_hull_2d(&pts))
}

/// Hausdorff distance between the hull of the limit-set sample and the hull
/// of the depth-`n` tiling (polygons only).
pub fn hull_gap<F: Scalar>(p: &CoxeterPolytope<F>, sample: &LimitSetSample, n: usize) -> Result<f64, LimitSetError> {
    let LimitHull::Polygon(h) = hull_of_limit_set(sample)? else {
        return Err(LimitSetError::Dimension(sample.chart.dim()));
    };
    let t = tiled_hull(p, n, &sample.chart)?;
    Ok(hausdorff_polygons(&h, &t))
}

/// `P ∩ Cone(v_s)` as a cone `{ x : c x <= 0 for every row c }`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedPolytope<F> {
    /// Facet covectors of `Delta` followed by those of the polar cone.
    pub covectors: Vec<Vec<F>>,
    pub vertices: Vec<Vec<F>>,
    /// Whether every vertex of `P` already lies in the polar cone.
    pub equals_p: bool,
}

impl<F: Scalar> TruncatedPolytope<F> {
    pub fn contains(&self, x: &[F], eps: f64) -> bool {
        self.covectors.iter().all(|c| !dot(c, x).is_pos(eps))
    }
}

/// Scales so that the largest entry has absolute value one (exactly, for rationals).
fn normalize<F: Scalar>(v: &[F]) -> Vec<F> {
    let k = (0..v.len()).max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs())).unwrap_or(0);
    let m = v[k].abs();
    v.iter().map(|c| c.clone() / m.clone()).collect()
}

fn same<F: Scalar>(a: &[F], b: &[F], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x.clone() - y.clone()).is_zero_eps(eps))
}

/// Rays spanning one-dimensional solution sets of `rows . x = 0` that satisfy
/// every constraint `c . x <= 0` and lie on the negative side of `psi`.
fn cone_vertices<F: Scalar>(cons: &[Vec<F>], dim: usize, psi: &[f64], eps: f64) -> Vec<Vec<F>> {
    let mut out: Vec<Vec<F>> = Vec::new();
    for sub in subsets_by_size(cons.len()).into_iter().filter(|s| s.len() == dim - 1) {
        let rows: Vec<Vec<F>> = sub.iter().map(|&i| cons[i].clone()).collect();
        let ker = Matrix::from_rows(&rows).kernel(eps);
        if ker.len() != 1 {
            continue;
        }
        let mut x = normalize(&ker[0]);
        let side: f64 = x.iter().zip(psi).map(|(a, b)| a.to_f64() * b).sum();
        if side > 0.0 {
            x = x.into_iter().map(|c| -c).collect();
        }
        if cons.iter().all(|c| !dot(c, &x).is_pos(eps)) && !out.iter().any(|y| same(y, &x, eps)) {
            out.push(x);
        }
    }
    out
}

/// The truncation `P ∩ P(Conv(v_s))` that seeds the minimal domain.
pub fn omega_min_seed<F: Scalar>(p: &CoxeterPolytope<F>) -> Result<TruncatedPolytope<F>, LimitSetError> {
    let m = p.ambient_dim();
    let rank = p.polar_rank();
    if rank != m {
        return Err(LimitSetError::PolarsDoNotSpan { rank, dim: m });
    }
    let eps = p.eps();
    let psi = perron_covector(p);
    let polars = p.polars().to_rows();
    // Facets of the polar cone: hyperplanes through m - 1 polars supporting all of them.
    let mut cone: Vec<Vec<F>> = Vec::new();
    for sub in subsets_by_size(polars.len()).into_iter().filter(|s| s.len() == m - 1) {
        let rows: Vec<Vec<F>> = sub.iter().map(|&i| polars[i].clone()).collect();
        let ker = Matrix::from_rows(&rows).kernel(eps);
        if ker.len() != 1 {
            continue;
        }
        let l = normalize(&ker[0]);
        let signs: Vec<Sign> = polars.iter().map(|v| dot(&l, v).sign(eps)).collect();
        let c = if signs.iter().all(|s| *s != Sign::Positive) {
            l
        } else if signs.iter().all(|s| *s != Sign::Negative) {
            l.into_iter().map(|c| -c).collect()
        } else {
            continue;
        };
        if !cone.iter().any(|d| same(d, &c, eps)) {
            cone.push(c);
        }
    }
    let p_vertices: Vec<Vec<F>> = p.vertices(DEFAULT_MAX_FACETS)?.into_iter().map(|v| v.witness).collect();
    let equals_p = p_vertices.iter().all(|x| cone.iter().all(|c| !dot(c, x).is_pos(eps)));
    let mut covectors = p.alphas().to_rows();
    covectors.extend(cone);
    let vertices = cone_vertices(&covectors, m, &psi, eps);
    Ok(TruncatedPolytope { covectors, vertices, equals_p })
}

/// Chart polygon of a truncation (d = 2).
pub fn truncation_polygon<F: Scalar>(t: &TruncatedPolytope<F>, chart: &Chart) -> Vec<[f64; 2]> {
    let pts: Vec<[f64; 2]> = t
        .vertices
        .iter()
        .filter_map(|v| chart.to_chart(&v.iter().map(|c| c.to_f64()).collect::<Vec<_>>()))
        .map(|y| [y[0], y[1]])
        .collect();
    convex_hull_2d(&pts)
}

/// Vertex count of the sample hull, for reports.
pub fn hull_size(h: &LimitHull) -> usize {
    match h {
        LimitHull::Interval(..) => 2,
        LimitHull::Polygon(v) => v.len(),
        LimitHull::Polyhedron(h) => h.vertex_indices().len(),
    }
}
