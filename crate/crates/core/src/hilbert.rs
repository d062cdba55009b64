//! Hilbert metric, Finsler norm and Busemann density of convex bodies in a
//! chart, and Monte-Carlo volumes of polygons.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{convex_hull_2d, polygon_area, ConvexBody};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HilbertError {
    #[error("point is not in the interior of the domain")]
    Outside,
    #[error("domain is unbounded along a chord")]
    Unbounded,
    #[error("zero direction")]
    ZeroDirection,
    #[error("unsupported dimension {0}")]
    Dimension(usize),
    #[error("nesting violated: a sample of the inner domain lies outside the outer one")]
    NotNested,
}

fn chord(body: &ConvexBody, x: &[f64], w: &[f64]) -> Result<(f64, f64), HilbertError> {
    if !body.contains(x) {
        return Err(HilbertError::Outside);
    }
    body.chord(x, w).ok_or(HilbertError::Unbounded)
}

/// `1/2 log [x' : x : y : y']` along the chord through `x` and `y`.
pub fn hilbert_distance(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<f64, HilbertError> {
    if !body.contains(y) {
        return Err(HilbertError::Outside);
    }
    let w: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    if w.iter().all(|&c| c == 0.0) {
        return if body.contains(x) { Ok(0.0) } else { Err(HilbertError::Outside) };
    }
    // x' = x - tm w, y = x + w, y' = x + tp w with tp > 1.
    let (tp, tm) = chord(body, x, &w)?;
    let ratio = (1.0 + tm) * tp / (tm * (tp - 1.0));
    Ok(0.5 * libm::log(ratio))
}

/// `F(x, w) = 1/2 (1/t+ + 1/t-)` with `t` measured in units of `w`.
pub fn finsler_norm(body: &ConvexBody, x: &[f64], w: &[f64]) -> Result<f64, HilbertError> {
    if w.iter().all(|&c| c == 0.0) {
        return Err(HilbertError::ZeroDirection);
    }
    let (tp, tm) = chord(body, x, w)?;
    Ok(0.5 * (1.0 / tp + 1.0 / tm))
}

/// Volume of the Euclidean unit ball in dimension `d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * PI / d as f64,
    }
}

/// `sigma_d / Leb(B_x)` where `B_x` is the Finsler unit ball at `x`.
///
/// Closed forms are used for quadrics (the metric is Riemannian) and for
/// polygons (the unit ball is the polar of a symmetrized polygon); polyhedra
/// in dimension 3 use spherical quadrature.
pub fn busemann_density(body: &ConvexBody, x: &[f64]) -> Result<f64, HilbertError> {
    if !body.contains(x) {
        return Err(HilbertError::Outside);
    }
    let d = body.dim();
    match body {
        ConvexBody::Quadric { a, b, c } => {
            let ax: Vec<f64> = a.mul_vec(x).iter().zip(b).map(|(u, v)| u + v).collect();
            let qx = x.iter().zip(&ax).map(|(u, v)| u * v).sum::<f64>() + b.iter().zip(x).map(|(u, v)| u * v).sum::<f64>() + c;
            let g = Matrix::from_fn(d, d, |i, j| (ax[i] * ax[j] - qx * a[(i, j)]) / (qx * qx));
            Ok(libm::sqrt(g.det()))
        }
        ConvexBody::Polytope { normals, offsets } => match d {
            1 => {
                let (tp, tm) = chord(body, x, &[1.0])?;
                Ok(0.5 * (1.0 / tp + 1.0 / tm))
            }
            2 => polygon_density(normals, offsets, x),
            3 => Ok(unit_ball_volume(3) / unit_ball_volume_quadrature3(body, x, 24)?),
            _ => Err(HilbertError::Dimension(d)),
        },
    }
}

/// Area of `B_x` for a polygon body: the polar of `1/2 (K - K)` where `K`
/// is the polar of `body - x`.
fn polygon_density(normals: &[Vec<f64>], offsets: &[f64], x: &[f64]) -> Result<f64, HilbertError> {
    let mut k: Vec<[f64; 2]> = Vec::with_capacity(normals.len());
    for (n, c) in normals.iter().zip(offsets) {
        let slack = c - (n[0] * x[0] + n[1] * x[1]);
        if slack <= 0.0 {
            return Err(HilbertError::Outside);
        }
        k.push([n[0] / slack, n[1] / slack]);
    }
    if !is_convex_ccw(&k) {
        k = convex_hull_2d(&k);
    }
    if k.len() < 3 {
        return Err(HilbertError::Unbounded);
    }
    let neg: Vec<[f64; 2]> = k.iter().map(|p| [-p[0], -p[1]]).collect();
    let sum = minkowski_sum(&k, &neg);
    let m = sum.len();
    let mut polar = Vec::with_capacity(m);
    for i in 0..m {
        // D = sum / 2, so the polar vertex solves p.w = 2, q.w = 2.
        let p = sum[i];
        let q = sum[(i + 1) % m];
        let det = p[0] * q[1] - p[1] * q[0];
        if det.abs() <= 1e-300 {
            continue;
        }
        polar.push([2.0 * (q[1] - p[1]) / det, 2.0 * (p[0] - q[0]) / det]);
    }
    let area = polygon_area(&polar);
    if !(area > 0.0) {
        return Err(HilbertError::Unbounded);
    }
    Ok(PI / area)
}

fn is_convex_ccw(p: &[[f64; 2]]) -> bool {
    let k = p.len();
    if k < 3 {
        return false;
    }
    let mut turn = 0.0;
    for i in 0..k {
        let (a, b, c) = (p[i], p[(i + 1) % k], p[(i + 2) % k]);
        let cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if cr <= 0.0 {
            return false;
        }
        turn += libm::atan2(cr, (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]));
    }
    (turn - 2.0 * PI).abs() < 1e-6
}

/// Minkowski sum of two convex counterclockwise polygons.
fn minkowski_sum(p: &[[f64; 2]], q: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let start = |v: &[[f64; 2]]| {
        (0..v.len()).min_by(|&a, &b| v[a][1].total_cmp(&v[b][1]).then(v[a][0].total_cmp(&v[b][0]))).unwrap_or(0)
    };
    let rot = |v: &[[f64; 2]]| {
        let s = start(v);
        let mut r: Vec<[f64; 2]> = (0..v.len()).map(|i| v[(s + i) % v.len()]).collect();
        r.push(r[0]);
        r.push(r[1]);
        r
    };
    let (a, b) = (rot(p), rot(q));
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(p.len() + q.len());
    while i < a.len() - 2 || j < b.len() - 2 {
        out.push([a[i][0] + b[j][0], a[i][1] + b[j][1]]);
        let ea = [a[i + 1][0] - a[i][0], a[i + 1][1] - a[i][1]];
        let eb = [b[j + 1][0] - b[j][0], b[j + 1][1] - b[j][1]];
        let cr = ea[0] * eb[1] - ea[1] * eb[0];
        if cr >= 0.0 && i < a.len() - 2 {
            i += 1;
        }
        if cr <= 0.0 && j < b.len() - 2 {
            j += 1;
        }
    }
    out
}

/// `Leb(B_x) = 1/2 int F(theta)^{-2} dtheta`, trapezoid rule on `2^k` angles.
pub fn unit_ball_area_quadrature(body: &ConvexBody, x: &[f64], k: u32) -> Result<f64, HilbertError> {
    let n = 1usize << k;
    let mut s = 0.0;
    for i in 0..n {
        let th = 2.0 * PI * i as f64 / n as f64;
        let f = finsler_norm(body, x, &[libm::cos(th), libm::sin(th)])?;
        s += 1.0 / (f * f);
    }
    Ok(0.5 * s * 2.0 * PI / n as f64)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        xs[i] = z;
        ws[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (xs, ws)
}

/// `Leb(B_x) = 1/3 int_{S^2} F(u)^{-3} du` by Gauss-Legendre in `cos theta`
/// and a uniform grid in `phi`.
pub fn unit_ball_volume_quadrature3(body: &ConvexBody, x: &[f64], n: usize) -> Result<f64, HilbertError> {
    let (zs, ws) = gauss_legendre(n);
    let nphi = 2 * n;
    let mut s = 0.0;
    for (z, w) in zs.iter().zip(&ws) {
        let r = libm::sqrt(1.0 - z * z);
        for j in 0..nphi {
            let ph = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
            let f = finsler_norm(body, x, &[r * libm::cos(ph), r * libm::sin(ph), *z])?;
            s += w / (f * f * f);
        }
    }
    Ok(s * (2.0 * PI / nphi as f64) / 3.0)
}

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub depth: usize,
    pub seed: u64,
    /// Samples redrawn because the density could not be evaluated.
    pub resampled: usize,
    /// Standard error of the paired difference with the previous estimate of
    /// the same sequence.
    pub paired_stderr: Option<f64>,
}

/// A triangle `(c, m, p)` whose corner `p` may lie on the boundary.
#[derive(Clone, Debug)]
struct Corner {
    tri: [[f64; 2]; 3],
    /// Shells only, with no core at `p`.
    truncated: bool,
}

#[derive(Clone, Copy, Debug)]
enum Piece {
    /// `h^k T \ h^{k+1} T` for the homothety `h` of ratio 1/2 at the corner.
    Shell(usize),
    /// `h^k T`.
    Core(usize),
}

#[derive(Clone, Debug)]
struct Stratum {
    corner: usize,
    piece: Piece,
    area: f64,
}

const ELLIPTIC_SHELLS: usize = 4;

/// Polygon region split into corner strata, with shells accumulating at the
/// corners flagged as ideal.
#[derive(Clone, Debug)]
pub struct StratifiedPolygon {
    corners: Vec<Corner>,
    strata: Vec<Stratum>,
}

impl StratifiedPolygon {
    /// `polygon` counterclockwise; `ideal[i]` marks vertices where the
    /// density may blow up; those corners get `max_shells` shells and no core.
    pub fn new(polygon: &[[f64; 2]], ideal: &[bool], max_shells: usize) -> Self {
        let k = polygon.len();
        let mut c = [0.0, 0.0];
        for p in polygon {
            c[0] += p[0] / k as f64;
            c[1] += p[1] / k as f64;
        }
        let mid = |i: usize| {
            let (a, b) = (polygon[i % k], polygon[(i + 1) % k]);
            [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
        };
        let mut corners = Vec::new();
        for i in 0..k {
            let p = polygon[i];
            corners.push(Corner { tri: [c, mid(i + k - 1), p], truncated: ideal[i] });
            corners.push(Corner { tri: [c, mid(i), p], truncated: ideal[i] });
        }
        let mut strata = Vec::new();
        for (ci, cr) in corners.iter().enumerate() {
            let area = polygon_area(&cr.tri).abs();
            let shells = if cr.truncated { max_shells } else { ELLIPTIC_SHELLS };
            for s in 0..shells {
                strata.push(Stratum { corner: ci, piece: Piece::Shell(s), area: area * 0.75 * libm::pow(0.25, s as f64) });
            }
            if !cr.truncated {
                strata.push(Stratum { corner: ci, piece: Piece::Core(shells), area: area * libm::pow(0.25, shells as f64) });
            }
        }
        StratifiedPolygon { corners, strata }
    }

    fn included(&self, j: usize, shells: usize) -> bool {
        let st = &self.strata[j];
        match st.piece {
            Piece::Shell(s) => !self.corners[st.corner].truncated || s < shells,
            Piece::Core(_) => true,
        }
    }

    fn sample(&self, j: usize, rng: &mut ChaCha8Rng) -> [f64; 2] {
        let st = &self.strata[j];
        let [a, b, p] = {
            let t = self.corners[st.corner].tri;
            [t[0], t[1], t[2]]
        };
        let uniform = |rng: &mut ChaCha8Rng| {
            let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            // Barycentric weight of the corner p is 1 - u - v.
            (u, v)
        };
        let (u, v, scale) = match st.piece {
            Piece::Shell(s) => loop {
                let (u, v) = uniform(rng);
                // Inside h T iff the corner weight exceeds 1/2.
                if 1.0 - u - v <= 0.5 {
                    break (u, v, libm::pow(0.5, s as f64));
                }
            },
            Piece::Core(s) => {
                let (u, v) = uniform(rng);
                (u, v, libm::pow(0.5, s as f64))
            }
        };
        let y = [p[0] + u * (a[0] - p[0]) + v * (b[0] - p[0]), p[1] + u * (a[1] - p[1]) + v * (b[1] - p[1])];
        [p[0] + scale * (y[0] - p[0]), p[1] + scale * (y[1] - p[1])]
    }

    /// Per-stratum sample counts summing to about `samples`.
    fn allocation(&self, samples: usize) -> Vec<usize> {
        let total: f64 = self.strata.iter().map(|s| s.area).sum();
        let j = self.strata.len() as f64;
        self.strata
            .iter()
            .map(|s| {
                let w = 0.5 * s.area / total + 0.5 / j;
                ((samples as f64 * w) as usize).max(2)
            })
            .collect()
    }
}

struct StratumStats {
    n: usize,
    mean: Vec<f64>,
    /// Sample covariance between bodies `i` and `i - 1` is tracked through
    /// the variance of consecutive differences.
    var: Vec<f64>,
    var_diff: Vec<f64>,
}

/// Densities of several bodies integrated over shared samples of a polygon.
///
/// `shells[i]` is the number of ideal-corner shells counted for body `i`.
/// Returns `(value, stderr, paired stderr with body i-1, resampled)` per body.
pub fn integrate_densities(
    bodies: &[ConvexBody],
    shells: &[usize],
    region: &StratifiedPolygon,
    samples: usize,
    seed: u64,
) -> Result<Vec<(f64, f64, Option<f64>, usize)>, HilbertError> {
    let nb = bodies.len();
    let alloc = region.allocation(samples);
    let mut stats = Vec::with_capacity(region.strata.len());
    let mut resampled = 0usize;
    for (j, &n) in alloc.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let mut sum = vec![0.0; nb];
        let mut sum2 = vec![0.0; nb];
        let mut dsum = vec![0.0; nb];
        let mut dsum2 = vec![0.0; nb];
        let mut vals = vec![0.0; nb];
        let mut k = 0;
        let mut failures = 0;
        while k < n {
            let x = region.sample(j, &mut rng);
            let mut ok = true;
            for (i, b) in bodies.iter().enumerate() {
                match busemann_density(b, &x) {
                    Ok(v) if v.is_finite() => vals[i] = v,
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                failures += 1;
                resampled += 1;
                if failures > 10 * n + 100 {
                    return Err(HilbertError::Outside);
                }
                continue;
            }
            for i in 0..nb {
                sum[i] += vals[i];
                sum2[i] += vals[i] * vals[i];
                if i > 0 {
                    let d = vals[i] - vals[i - 1];
                    dsum[i] += d;
                    dsum2[i] += d * d;
                }
            }
            k += 1;
        }
        let nf = n as f64;
        let var = |s: f64, s2: f64| libm::fmax(0.0, (s2 - s * s / nf) / (nf - 1.0));
        stats.push(StratumStats {
            n,
            mean: sum.iter().map(|s| s / nf).collect(),
            var: sum.iter().zip(&sum2).map(|(s, s2)| var(*s, *s2)).collect(),
            var_diff: dsum.iter().zip(&dsum2).map(|(s, s2)| var(*s, *s2)).collect(),
        });
    }
    let mut out = Vec::with_capacity(nb);
    for i in 0..nb {
        let (mut value, mut var, mut pvar) = (0.0, 0.0, 0.0);
        for (j, st) in stats.iter().enumerate() {
            if !region.included(j, shells[i]) {
                continue;
            }
            let a = region.strata[j].area;
            value += a * st.mean[i];
            var += a * a * st.var[i] / st.n as f64;
            if i > 0 {
                let v = if region.included(j, shells[i - 1]) { st.var_diff[i] } else { st.var[i] };
                pvar += a * a * v / st.n as f64;
            }
        }
        out.push((value, libm::sqrt(var), if i > 0 { Some(libm::sqrt(pvar)) } else { None }, resampled));
    }
    Ok(out)
}

/// Convenience: volume of a polygon inside one body, all corners treated as interior.
pub fn estimate_polygon_volume(body: &ConvexBody, polygon: &[[f64; 2]], samples: usize, seed: u64) -> Result<VolumeEstimate, HilbertError> {
    let region = StratifiedPolygon::new(polygon, &vec![false; polygon.len()], 0);
    let r = integrate_densities(core::slice::from_ref(body), &[0], &region, samples, seed)?;
    Ok(VolumeEstimate { value: r[0].0, stderr: r[0].1, samples, depth: 0, seed, resampled: r[0].3, paired_stderr: None })
}

/// Paired estimates `(mu_{outer}(B), mu_{inner}(B))` on shared samples, with
/// the standard error of their difference.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityProbe {
    pub outer: VolumeEstimate,
    pub inner: VolumeEstimate,
    pub diff_stderr: f64,
}

/// Paired volume probe of nested domains: `inner` must be contained in `outer` on every sample.
pub fn monotonicity_probe(
    inner: &ConvexBody,
    outer: &ConvexBody,
    region: &[[f64; 2]],
    samples: usize,
    seed: u64,
) -> Result<MonotonicityProbe, HilbertError> {
    let strat = StratifiedPolygon::new(region, &vec![false; region.len()], 0);
    // Nesting spot check on the sample points themselves.
    for j in 0..strat.strata.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        rng.set_stream(j as u64);
        for _ in 0..8 {
            let x = strat.sample(j, &mut rng);
            if inner.contains(&x) && !outer.contains(&x) {
                return Err(HilbertError::NotNested);
            }
        }
    }
    if region.iter().any(|v| inner.contains(v) && !outer.contains(v)) {
        return Err(HilbertError::NotNested);
    }
    let r = integrate_densities(&[outer.clone(), inner.clone()], &[0, 0], &strat, samples, seed)?;
    let mk = |k: usize| VolumeEstimate {
        value: r[k].0,
        stderr: r[k].1,
        samples,
        depth: 0,
        seed,
        resampled: r[k].3,
        paired_stderr: None,
    };
    Ok(MonotonicityProbe { outer: mk(0), inner: mk(1), diff_stderr: r[1].2.unwrap_or(0.0) })
}

/// Join `{apex} (x) [b1, b2]`: the triangle with the projective contraction
/// `h` fixing the apex (eigenvalue 2) and the base line pointwise.
#[derive(Clone, Debug)]
pub struct PointSegmentJoin {
    pub apex: [f64; 2],
    pub base: [[f64; 2]; 2],
}

impl PointSegmentJoin {
    pub fn body(&self) -> ConvexBody {
        let t = [self.apex, self.base[0], self.base[1]];
        if polygon_area(&t) > 0.0 {
            ConvexBody::polygon(&t)
        } else {
            ConvexBody::polygon(&[t[0], t[2], t[1]])
        }
    }

    /// `h = Id + v (x) l` on homogeneous chart coordinates, where `l`
    /// vanishes on the base line and `l(v) = 1`.
    pub fn contraction(&self) -> Matrix<f64> {
        let (a, b) = (self.base[0], self.base[1]);
        // Line through a, b: l(x, y, 1) = n.x - c.
        let n = [b[1] - a[1], a[0] - b[0]];
        let c = n[0] * a[0] + n[1] * a[1];
        let lv = n[0] * self.apex[0] + n[1] * self.apex[1] - c;
        let l = [n[0] / lv, n[1] / lv, -c / lv];
        let v = [self.apex[0], self.apex[1], 1.0];
        Matrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 } + v[i] * l[j])
    }

    pub fn apply(h: &Matrix<f64>, p: [f64; 2]) -> [f64; 2] {
        let y = h.mul_vec(&[p[0], p[1], 1.0]);
        [y[0] / y[2], y[1] / y[2]]
    }
}

/// Slab-wise volumes `mu(h^k Q \ h^{k+1} Q)` of a polygon `Q` (counterclockwise,
/// one vertex at the apex) and their partial sums.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceProbe {
    pub slabs: Vec<VolumeEstimate>,
    pub partial_sums: Vec<f64>,
    pub partial_stderr: Vec<f64>,
}

pub fn join_divergence_probe(
    join: &PointSegmentJoin,
    q: &[[f64; 2]],
    slabs: usize,
    samples_per_slab: usize,
    seed: u64,
) -> Result<DivergenceProbe, HilbertError> {
    let body = join.body();
    let h = join.contraction();
    let mut poly: Vec<[f64; 2]> = q.to_vec();
    let mut out = Vec::with_capacity(slabs);
    let (mut acc, mut acc_var) = (0.0, 0.0);
    let mut partial_sums = Vec::with_capacity(slabs);
    let mut partial_stderr = Vec::with_capacity(slabs);
    for k in 0..slabs {
        let inner: Vec<[f64; 2]> = poly.iter().map(|&p| PointSegmentJoin::apply(&h, p)).collect();
        let est = slab_volume(&body, &poly, &inner, samples_per_slab, seed.wrapping_add(k as u64))?;
        acc += est.value;
        acc_var += est.stderr * est.stderr;
        partial_sums.push(acc);
        partial_stderr.push(libm::sqrt(acc_var));
        out.push(VolumeEstimate { depth: k, ..est });
        poly = inner;
    }
    Ok(DivergenceProbe { slabs: out, partial_sums, partial_stderr })
}

fn inside_convex(p: [f64; 2], poly: &[[f64; 2]]) -> bool {
    let k = poly.len();
    (0..k).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % k]);
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
    })
}

/// `mu(outer \ inner)` by rejection from a fan triangulation of `outer`.
fn slab_volume(body: &ConvexBody, outer: &[[f64; 2]], inner: &[[f64; 2]], samples: usize, seed: u64) -> Result<VolumeEstimate, HilbertError> {
    let o = outer[0];
    let tris: Vec<[[f64; 2]; 3]> = (1..outer.len() - 1).map(|i| [o, outer[i], outer[i + 1]]).collect();
    let per = (samples / tris.len()).max(2);
    let (mut value, mut var) = (0.0, 0.0);
    for (j, t) in tris.iter().enumerate() {
        let area = polygon_area(t).abs();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..per {
            let (mut u, mut v): (f64, f64) = (rng.gen(), rng.gen());
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            let x = [
                t[0][0] + u * (t[1][0] - t[0][0]) + v * (t[2][0] - t[0][0]),
                t[0][1] + u * (t[1][1] - t[0][1]) + v * (t[2][1] - t[0][1]),
            ];
            let f = if inside_convex(x, inner) { 0.0 } else { busemann_density(body, &x)? };
            s += f;
            s2 += f * f;
        }
        let n = per as f64;
        let mean = s / n;
        value += area * mean;
        var += area * area * libm::fmax(0.0, (s2 - s * s / n) / (n - 1.0)) / n;
    }
    Ok(VolumeEstimate {
        value,
        stderr: libm::sqrt(var),
        samples: per * tris.len(),
        depth: 0,
        seed,
        resampled: 0,
        paired_stderr: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> ConvexBody {
        ConvexBody::ball(2, 1.0)
    }

    #[test]
    fn distance_on_diameter() {
        let d = hilbert_distance(&disk(), &[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert!((d - libm::atanh(0.5)).abs() < 1e-14);
        assert_eq!(hilbert_distance(&disk(), &[0.1, 0.2], &[0.1, 0.2]).unwrap(), 0.0);
        assert_eq!(hilbert_distance(&disk(), &[0.0, 0.0], &[1.5, 0.0]), Err(HilbertError::Outside));
    }

    #[test]
    fn finsler_at_center_and_finite_difference() {
        assert!((finsler_norm(&disk(), &[0.0, 0.0], &[0.6, 0.8]).unwrap() - 1.0).abs() < 1e-15);
        let x = [0.3, -0.2];
        let w = [0.4, 0.7];
        let f = finsler_norm(&disk(), &x, &w).unwrap();
        let mut prev = f64::INFINITY;
        for h in [1e-3, 1e-4] {
            let y = [x[0] + h * w[0], x[1] + h * w[1]];
            let fd = hilbert_distance(&disk(), &x, &y).unwrap() / h;
            let err = (fd - f).abs();
            assert!(err < 10.0 * h);
            assert!(err < prev);
            prev = err;
        }
    }

    #[test]
    fn klein_density() {
        for r in [0.0, 0.3, 0.7, 0.95] {
            let d = busemann_density(&disk(), &[r, 0.0]).unwrap();
            let expected = libm::pow(1.0 - r * r, -1.5);
            assert!((d - expected).abs() < 1e-10 * expected, "{r}");
        }
    }

    #[test]
    fn polygon_density_matches_quadrature() {
        let body = ConvexBody::polygon(&[[0.0, 0.0], [3.0, 0.0], [2.0, 2.0], [0.0, 1.5]]);
        let x = [1.1, 0.7];
        let closed = busemann_density(&body, &x).unwrap();
        let area = unit_ball_area_quadrature(&body, &x, 16).unwrap();
        assert!((closed - PI / area).abs() < 1e-6 * closed);
    }

    #[test]
    fn cube_density_quadrature() {
        // Cube [-1,1]^3 at the center: F = |w|_inf ... the unit ball is the cube itself.
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for k in 0..3 {
            for s in [-1.0, 1.0] {
                let mut n = vec![0.0; 3];
                n[k] = s;
                normals.push(n);
                offsets.push(1.0);
            }
        }
        let body = ConvexBody::Polytope { normals, offsets };
        let v = unit_ball_volume_quadrature3(&body, &[0.0, 0.0, 0.0], 48).unwrap();
        assert!((v - 8.0).abs() < 0.05, "{v}");
    }

    #[test]
    fn ball3_density() {
        let b = ConvexBody::ball(3, 1.0);
        let d = busemann_density(&b, &[0.5, 0.0, 0.0]).unwrap();
        assert!((d - libm::pow(0.75, -2.0)).abs() < 1e-10);
    }

    #[test]
    fn point_region_has_zero_volume() {
        let p = [0.2, 0.1];
        let e = estimate_polygon_volume(&disk(), &[p, p, p], 1000, 1).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn estimates_are_reproducible() {
        let tri = [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]];
        let a = estimate_polygon_volume(&disk(), &tri, 5000, 9).unwrap();
        let b = estimate_polygon_volume(&disk(), &tri, 5000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn contraction_fixes_apex_and_base() {
        let j = PointSegmentJoin { apex: [0.0, 1.0], base: [[-1.0, 0.0], [1.0, 0.0]] };
        let h = j.contraction();
        let a = PointSegmentJoin::apply(&h, [0.0, 1.0]);
        assert!((a[0]).abs() < 1e-15 && (a[1] - 1.0).abs() < 1e-15);
        let b = PointSegmentJoin::apply(&h, [0.3, 0.0]);
        assert!((b[0] - 0.3).abs() < 1e-15 && b[1].abs() < 1e-15);
        let m = PointSegmentJoin::apply(&h, [0.0, 0.5]);
        assert!(m[1] > 0.5);
    }
}
