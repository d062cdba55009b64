//! Affine charts, convex bodies in a chart, and small convex hulls.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::{norm_f64, Matrix};

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The affine chart `{psi = -1}` of `P(V)`, with orthonormal coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    psi: Vec<f64>,
    origin: Vec<f64>,
    /// `(d+1) x d`, orthonormal columns spanning `ker psi`.
    basis: Matrix<f64>,
}

impl Chart {
    /// Chart for the covector `psi != 0`; points with `psi < 0` are visible.
    pub fn new(psi: &[f64]) -> Self {
        let m = psi.len();
        let nn = dotf(psi, psi);
        assert!(nn > 0.0, "chart covector must be nonzero");
        let origin: Vec<f64> = psi.iter().map(|p| -p / nn).collect();
        let mut cols: Vec<Vec<f64>> = Vec::new();
        let unit_psi: Vec<f64> = psi.iter().map(|p| p / libm::sqrt(nn)).collect();
        for j in 0..m {
            let mut v = vec![0.0; m];
            v[j] = 1.0;
            let c = dotf(&v, &unit_psi);
            for i in 0..m {
                v[i] -= c * unit_psi[i];
            }
            for b in &cols {
                let c = dotf(&v, b);
                for i in 0..m {
                    v[i] -= c * b[i];
                }
            }
            let n = norm_f64(&v);
            if n > 1e-8 {
                cols.push(v.iter().map(|x| x / n).collect());
            }
            if cols.len() == m - 1 {
                break;
            }
        }
        let basis = Matrix::from_fn(m, m - 1, |i, j| cols[j][i]);
        Chart { psi: psi.to_vec(), origin, basis }
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    /// Chart dimension `d`.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of the ray through `x`, if `psi(x) < 0`.
    pub fn to_chart(&self, x: &[f64]) -> Option<Vec<f64>> {
        let p = dotf(&self.psi, x);
        if !(p < 0.0) {
            return None;
        }
        Some((0..self.dim()).map(|j| (0..x.len()).map(|i| self.basis[(i, j)] * x[i]).sum::<f64>() / -p).collect())
    }

    /// Representative of the chart point `y` with `psi = -1`.
    pub fn from_chart(&self, y: &[f64]) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (j, yj) in y.iter().enumerate() {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += self.basis[(i, j)] * yj;
            }
        }
        x
    }

    /// `phi < 0` as a half-space `n . y < c` in chart coordinates.
    pub fn halfspace(&self, phi: &[f64]) -> (Vec<f64>, f64) {
        let n: Vec<f64> = (0..self.dim()).map(|j| (0..phi.len()).map(|i| phi[i] * self.basis[(i, j)]).sum()).collect();
        (n, -dotf(phi, &self.origin))
    }

    /// Restriction of a quadratic form on `V` to the chart:
    /// `y^T a y + 2 b.y + c`.
    pub fn quadric(&self, form: &Matrix<f64>) -> (Matrix<f64>, Vec<f64>, f64) {
        let e = &self.basis;
        let a = e.transpose().mul(form).mul(e);
        let bo = form.mul_vec(&self.origin);
        let b = e.transpose().mul_vec(&bo);
        let c = dotf(&self.origin, &bo);
        (a, b, c)
    }

    /// Applies a linear map of `V` to a chart point.
    pub fn apply(&self, g: &Matrix<f64>, y: &[f64]) -> Option<Vec<f64>> {
        self.to_chart(&g.mul_vec(&self.from_chart(y)))
    }
}

/// Open bounded convex body in a chart.
#[derive(Clone, Debug, PartialEq)]
pub enum ConvexBody {
    /// `n_i . y < c_i`.
    Polytope { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    /// `y^T a y + 2 b.y + c < 0` with `a` positive definite.
    Quadric { a: Matrix<f64>, b: Vec<f64>, c: f64 },
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Polytope { normals, .. } => normals.first().map_or(0, |n| n.len()),
            ConvexBody::Quadric { b, .. } => b.len(),
        }
    }

    /// Unit disk or ball of radius `r` centred at the origin.
    pub fn ball(d: usize, r: f64) -> Self {
        ConvexBody::Quadric { a: Matrix::identity(d), b: vec![0.0; d], c: -r * r }
    }

    /// Ellipsoid `{ (y - center)^T m (y - center) < 1 }`.
    pub fn ellipsoid(m: &Matrix<f64>, center: &[f64]) -> Self {
        let b: Vec<f64> = m.mul_vec(center).iter().map(|v| -v).collect();
        let c = dotf(center, &m.mul_vec(center)) - 1.0;
        ConvexBody::Quadric { a: m.clone(), b, c }
    }

    /// Body from a list of vertices of a convex polygon (counterclockwise).
    pub fn polygon(vertices: &[[f64; 2]]) -> Self {
        let k = vertices.len();
        let mut normals = Vec::with_capacity(k);
        let mut offsets = Vec::with_capacity(k);
        for i in 0..k {
            let p = vertices[i];
            let q = vertices[(i + 1) % k];
            let n = [q[1] - p[1], p[0] - q[0]];
            offsets.push(n[0] * p[0] + n[1] * p[1]);
            normals.push(n.to_vec());
        }
        ConvexBody::Polytope { normals, offsets }
    }

    /// Value of the defining function; negative inside.
    pub fn level(&self, y: &[f64]) -> f64 {
        match self {
            ConvexBody::Polytope { normals, offsets } => {
                normals.iter().zip(offsets).fold(f64::NEG_INFINITY, |m, (n, c)| libm::fmax(m, dotf(n, y) - c))
            }
            ConvexBody::Quadric { a, b, c } => dotf(y, &a.mul_vec(y)) + 2.0 * dotf(b, y) + c,
        }
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.level(y) < 0.0
    }

    /// Largest `t > 0` with `y + s w` inside for `0 <= s < t`; `None` if the
    /// ray never leaves (unbounded body) or `y` is not inside.
    pub fn ray_exit(&self, y: &[f64], w: &[f64]) -> Option<f64> {
        match self {
            ConvexBody::Polytope { normals, offsets } => {
                let mut t = f64::INFINITY;
                for (n, c) in normals.iter().zip(offsets) {
                    let slack = c - dotf(n, y);
                    if slack <= 0.0 {
                        return None;
                    }
                    let rate = dotf(n, w);
                    if rate > 0.0 {
                        t = libm::fmin(t, slack / rate);
                    }
                }
                if t.is_finite() {
                    Some(t)
                } else {
                    None
                }
            }
            ConvexBody::Quadric { a, b, c } => {
                let aw = a.mul_vec(w);
                let qa = dotf(w, &aw);
                let qb = dotf(y, &aw) + dotf(b, w);
                let qc = dotf(y, &a.mul_vec(y)) + 2.0 * dotf(b, y) + c;
                if qc >= 0.0 || qa <= 0.0 {
                    return None;
                }
                let disc = qb * qb - qa * qc;
                // Stable root of qa t^2 + 2 qb t + qc = 0 with t > 0.
                let s = libm::sqrt(disc);
                let t = if qb >= 0.0 { -qc / (qb + s) } else { (s - qb) / qa };
                Some(t)
            }
        }
    }

    /// Chord parameters `(t_plus, t_minus)` along `+w` and `-w`.
    pub fn chord(&self, y: &[f64], w: &[f64]) -> Option<(f64, f64)> {
        let neg: Vec<f64> = w.iter().map(|v| -v).collect();
        Some((self.ray_exit(y, w)?, self.ray_exit(y, &neg)?))
    }

    /// Image under an invertible affine map `y -> m y + t`.
    pub fn affine_image(&self, m: &Matrix<f64>, t: &[f64]) -> Option<Self> {
        let minv = m.inverse(1e-14)?;
        // y' = m y + t  <=>  y = minv (y' - t)
        let shift: Vec<f64> = minv.mul_vec(t);
        Some(match self {
            ConvexBody::Polytope { normals, offsets } => {
                let mut ns = Vec::new();
                let mut cs = Vec::new();
                for (n, c) in normals.iter().zip(offsets) {
                    let n2 = minv.transpose().mul_vec(n);
                    cs.push(c + dotf(n, &shift));
                    ns.push(n2);
                }
                ConvexBody::Polytope { normals: ns, offsets: cs }
            }
            ConvexBody::Quadric { a, b, c } => {
                // q(minv (y' - t)) with z = minv y' - shift
                let a2 = minv.transpose().mul(a).mul(&minv);
                let ashift = a.mul_vec(&shift);
                let lin: Vec<f64> = b.iter().zip(&ashift).map(|(bi, ai)| bi - ai).collect();
                let b2 = minv.transpose().mul_vec(&lin);
                let c2 = dotf(&shift, &ashift) - 2.0 * dotf(b, &shift) + c;
                ConvexBody::Quadric { a: a2, b: b2, c: c2 }
            }
        })
    }
}

/// Signed area of a polygon (positive when counterclockwise).
pub fn polygon_area(p: &[[f64; 2]]) -> f64 {
    let k = p.len();
    let mut s = 0.0;
    for i in 0..k {
        let a = p[i];
        let b = p[(i + 1) % k];
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counterclockwise convex hull (Andrew's monotone chain), collinear points dropped.
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Clips a convex polygon by `n . y <= c` (Sutherland-Hodgman, one plane).
pub fn clip_polygon(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let k = poly.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let p = poly[i];
        let q = poly[(i + 1) % k];
        let fp = n[0] * p[0] + n[1] * p[1] - c;
        let fq = n[0] * q[0] + n[1] * q[1] - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Vertices of `{n_i . y <= c_i}` inside the box `|y|_inf <= bound`.
pub fn halfplane_polygon(normals: &[Vec<f64>], offsets: &[f64], bound: f64) -> Vec<[f64; 2]> {
    let mut poly = vec![[-bound, -bound], [bound, -bound], [bound, bound], [-bound, bound]];
    for (n, c) in normals.iter().zip(offsets) {
        poly = clip_polygon(&poly, [n[0], n[1]], *c);
        if poly.is_empty() {
            break;
        }
    }
    // Drop near-duplicate consecutive vertices produced by degenerate cuts.
    let scale = bound.max(1.0);
    let mut clean: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for p in poly {
        if clean.last().map_or(true, |q: &[f64; 2]| (p[0] - q[0]).abs() + (p[1] - q[1]).abs() > 1e-13 * scale) {
            clean.push(p);
        }
    }
    while clean.len() > 1 {
        let (f, l) = (clean[0], clean[clean.len() - 1]);
        if (f[0] - l[0]).abs() + (f[1] - l[1]).abs() <= 1e-13 * scale {
            clean.pop();
        } else {
            break;
        }
    }
    clean
}

/// Euclidean distance from `p` to a convex polygon (0 inside).
pub fn point_polygon_distance(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    let k = poly.len();
    if k == 0 {
        return f64::INFINITY;
    }
    let inside = (0..k).all(|i| cross(poly[i], poly[(i + 1) % k], p) >= 0.0);
    if inside && k >= 3 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for i in 0..k {
        let a = poly[i];
        let b = poly[(i + 1) % k];
        let ab = [b[0] - a[0], b[1] - a[1]];
        let ap = [p[0] - a[0], p[1] - a[1]];
        let len2 = ab[0] * ab[0] + ab[1] * ab[1];
        let t = if len2 > 0.0 { ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
        let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
        best = libm::fmin(best, libm::sqrt(d[0] * d[0] + d[1] * d[1]));
    }
    best
}

/// Hausdorff distance between two convex polygons.
pub fn hausdorff_polygons(p: &[[f64; 2]], q: &[[f64; 2]]) -> f64 {
    let a = p.iter().fold(0.0, |m, &x| libm::fmax(m, point_polygon_distance(x, q)));
    let b = q.iter().fold(0.0, |m, &x| libm::fmax(m, point_polygon_distance(x, p)));
    libm::fmax(a, b)
}

/// Triangle facets of a 3-D convex hull, outward oriented, as vertex indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull3 {
    pub points: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
}

fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Incremental 3-D convex hull; `None` when the points are coplanar.
pub fn convex_hull_3d(points: &[[f64; 3]], tol: f64) -> Option<Hull3> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    // Initial tetrahedron from extreme, well separated points.
    let i0 = 0;
    let i1 = (0..n).max_by(|&a, &b| norm3(sub3(points[a], points[i0])).total_cmp(&norm3(sub3(points[b], points[i0]))))?;
    let e = sub3(points[i1], points[i0]);
    let i2 = (0..n).max_by(|&a, &b| {
        norm3(cross3(e, sub3(points[a], points[i0]))).total_cmp(&norm3(cross3(e, sub3(points[b], points[i0]))))
    })?;
    let nrm = cross3(e, sub3(points[i2], points[i0]));
    if norm3(nrm) <= tol {
        return None;
    }
    let i3 = (0..n).max_by(|&a, &b| {
        dot3(nrm, sub3(points[a], points[i0])).abs().total_cmp(&dot3(nrm, sub3(points[b], points[i0])).abs())
    })?;
    if dot3(nrm, sub3(points[i3], points[i0])).abs() <= tol * norm3(nrm) {
        return None;
    }
    let centroid = {
        let mut c = [0.0; 3];
        for &i in &[i0, i1, i2, i3] {
            for k in 0..3 {
                c[k] += points[i][k] / 4.0;
            }
        }
        c
    };
    let orient = |f: [usize; 3]| -> [usize; 3] {
        let nn = cross3(sub3(points[f[1]], points[f[0]]), sub3(points[f[2]], points[f[0]]));
        if dot3(nn, sub3(centroid, points[f[0]])) > 0.0 {
            [f[0], f[2], f[1]]
        } else {
            f
        }
    };
    let mut faces: Vec<[usize; 3]> =
        vec![orient([i0, i1, i2]), orient([i0, i1, i3]), orient([i0, i2, i3]), orient([i1, i2, i3])];
    for p in 0..n {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| {
                let nn = cross3(sub3(points[f[1]], points[f[0]]), sub3(points[f[2]], points[f[0]]));
                dot3(nn, sub3(points[p], points[f[0]])) > tol * norm3(nn)
            })
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            if !visible[fi] {
                continue;
            }
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let shared = faces.iter().enumerate().any(|(gj, g)| {
                    gj != fi && visible[gj] && (0..3).any(|m| g[m] == b && g[(m + 1) % 3] == a)
                });
                if !shared {
                    horizon.push((a, b));
                }
            }
        }
        let mut kept: Vec<[usize; 3]> = faces.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        for (a, b) in horizon {
            kept.push([a, b, p]);
        }
        faces = kept;
    }
    Some(Hull3 { points: points.to_vec(), faces })
}

fn norm3(a: [f64; 3]) -> f64 {
    libm::sqrt(dot3(a, a))
}

impl Hull3 {
    /// Outward half-spaces `n . y <= c` of the facets.
    pub fn halfspaces(&self) -> Vec<([f64; 3], f64)> {
        self.faces
            .iter()
            .map(|f| {
                let p = self.points[f[0]];
                let n = cross3(sub3(self.points[f[1]], p), sub3(self.points[f[2]], p));
                let l = norm3(n);
                let n = [n[0] / l, n[1] / l, n[2] / l];
                (n, dot3(n, p))
            })
            .collect()
    }

    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().flat_map(|f| f.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn volume(&self) -> f64 {
        let o = self.points[self.faces[0][0]];
        self.faces
            .iter()
            .map(|f| dot3(sub3(self.points[f[0]], o), cross3(sub3(self.points[f[1]], o), sub3(self.points[f[2]], o))) / 6.0)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_roundtrip() {
        let c = Chart::new(&[1.0, 2.0, -0.5]);
        let x = [-1.0, -0.3, 0.7];
        let y = c.to_chart(&x).unwrap();
        let back = c.from_chart(&y);
        let s = -dotf(c.psi(), &x);
        for i in 0..3 {
            assert!((back[i] * s - x[i]).abs() < 1e-12);
        }
        assert!(c.to_chart(&[1.0, 1.0, 0.0]).is_none());
    }

    #[test]
    fn hull_square_with_interior_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5], [0.5, 0.0]];
        let h = convex_hull_2d(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn halfplanes_to_triangle() {
        let normals = vec![vec![0.0, -1.0], vec![-1.0, 0.0], vec![1.0, 1.0]];
        let p = halfplane_polygon(&normals, &[0.0, 0.0, 1.0], 10.0);
        assert_eq!(p.len(), 3);
        assert!((polygon_area(&p) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ray_exit_disk() {
        let d = ConvexBody::ball(2, 1.0);
        let t = d.ray_exit(&[0.5, 0.0], &[1.0, 0.0]).unwrap();
        assert!((t - 0.5).abs() < 1e-15);
        let t = d.ray_exit(&[0.5, 0.0], &[-2.0, 0.0]).unwrap();
        assert!((t - 0.75).abs() < 1e-15);
    }

    #[test]
    fn hull3_cube() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64, (i >> 1 & 1) as f64, (i >> 2 & 1) as f64]);
        }
        pts.push([0.5, 0.5, 0.5]);
        let h = convex_hull_3d(&pts, 1e-12).unwrap();
        assert!((h.volume() - 1.0).abs() < 1e-12);
        assert_eq!(h.vertex_indices().len(), 8);
    }

    #[test]
    fn hausdorff_nested_squares() {
        let a = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let b = [[0.5, 0.5], [1.5, 0.5], [1.5, 1.5], [0.5, 1.5]];
        assert!((hausdorff_polygons(&a, &b) - libm::sqrt(0.5)).abs() < 1e-12);
    }
}
