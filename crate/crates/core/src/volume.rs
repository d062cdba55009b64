//! Volume of a Coxeter polygon in its Vinberg domain.
//!
//! The domain is the exact quadric when the invariant form is Lorentzian and
//! the polygon sits in its closed negative cone. Otherwise it is replaced by
//! the outer approximation
//! `O_N = { x : phi(gamma^{-1} x) < 0 for phi in Phi, |gamma| <= N }`,
//! where `Phi` are the extreme rays of `{ sum Y_s alpha_s : Y >= 0, Y A <= 0 }`.
//! Every such covector is nonpositive on the Vinberg cone, so `O_N` contains
//! the domain and decreases in `N`.
//!
//! Corners of the polygon at non-elliptic vertices lie on the boundary; the
//! estimate at depth `N` excludes the part of those corners within relative
//! distance `4^{-N}` of the vertex. Both effects make the depth-`N` estimate
//! a lower bound for the true volume that increases with `N`.

use alloc::vec;
use alloc::vec::Vec;

use crate::cartan::MatrixType;
use crate::geometry::{halfplane_polygon, Chart, ConvexBody};
use crate::hilbert::{integrate_densities, HilbertError, StratifiedPolygon, VolumeEstimate};
use crate::matrix::{norm_f64, Matrix};
use crate::polytope::{CoxeterPolytope, FaceKind, PolytopeError, DEFAULT_MAX_FACETS};
use crate::scalar::Scalar;
use crate::vinberg::{expand_orbit, perron_covector, quadric_domain, OrbitError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum VolumeError {
    #[error("volume estimation needs a polygon (d = 2), got d = {0}")]
    Dimension(usize),
    #[error("the Cartan matrix is not of negative type")]
    NotNegativeType,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Extreme rays of `{Y >= 0, Y A <= 0}`, normalized to unit sum.
pub fn dual_cone_rays(a: &Matrix<f64>) -> Vec<Vec<f64>> {
    let n = a.rows();
    // Constraint rows c with c.Y >= 0: e_s and -(A column t).
    let mut cons: Vec<Vec<f64>> = Vec::with_capacity(2 * n);
    for s in 0..n {
        let mut e = vec![0.0; n];
        e[s] = 1.0;
        cons.push(e);
    }
    for t in 0..n {
        cons.push((0..n).map(|s| -a[(s, t)]).collect());
    }
    let tol = 1e-10 * libm::fmax(1.0, a.max_abs());
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let m = cons.len();
    let mut pick = vec![0usize; n - 1];
    fn next(pick: &mut [usize], m: usize) -> bool {
        let k = pick.len();
        for i in (0..k).rev() {
            if pick[i] < m - k + i {
                pick[i] += 1;
                for j in i + 1..k {
                    pick[j] = pick[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, p) in pick.iter_mut().enumerate() {
        *p = i;
    }
    loop {
        let rows: Vec<Vec<f64>> = pick.iter().map(|&i| cons[i].clone()).collect();
        let ker = if rows.is_empty() { vec![vec![1.0; n]] } else { Matrix::from_rows(&rows).kernel(1e-12) };
        if ker.len() == 1 {
            for sign in [1.0, -1.0] {
                let y: Vec<f64> = ker[0].iter().map(|v| v * sign).collect();
                let scale = norm_f64(&y);
                if cons.iter().all(|c| c.iter().zip(&y).map(|(u, v)| u * v).sum::<f64>() >= -tol * scale) {
                    let s: f64 = y.iter().sum();
                    if s > 0.0 {
                        let y: Vec<f64> = y.iter().map(|v| v / s).collect();
                        if !rays.iter().any(|r| r.iter().zip(&y).all(|(u, v)| (u - v).abs() < 1e-9)) {
                            rays.push(y);
                        }
                    }
                }
            }
        }
        if n < 2 || !next(&mut pick, m) {
            break;
        }
    }
    rays
}

/// A polygon in its chart with the domains used at each depth.
#[derive(Clone, Debug)]
pub struct VolumeProblem {
    pub chart: Chart,
    /// Vertices of `P` in the chart, counterclockwise.
    pub polygon: Vec<[f64; 2]>,
    /// Non-elliptic vertices: these lie on the boundary of the domain.
    pub ideal: Vec<bool>,
    pub depths: Vec<usize>,
    /// One domain per depth.
    pub domains: Vec<ConvexBody>,
    /// True when the domain is the exact invariant quadric.
    pub exact_domain: bool,
}

fn to2(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

/// Builds the chart, the polygon, and the domain for each depth.
pub fn volume_problem<F: Scalar>(p: &CoxeterPolytope<F>, depths: &[usize]) -> Result<VolumeProblem, VolumeError> {
    if p.dim() != 2 {
        return Err(VolumeError::Dimension(p.dim()));
    }
    if !p.cartan().classify_type().is(MatrixType::Negative) {
        return Err(VolumeError::NotNegativeType);
    }
    let chart = Chart::new(&perron_covector(p));
    let mut verts: Vec<([f64; 2], bool)> = Vec::new();
    for v in p.vertices(DEFAULT_MAX_FACETS)? {
        let x: Vec<f64> = v.witness.iter().map(|c| c.to_f64()).collect();
        let y = chart.to_chart(&x).ok_or(HilbertError::Outside)?;
        verts.push((to2(&y), v.kind != FaceKind::Elliptic));
    }
    let k = verts.len() as f64;
    let c = verts.iter().fold([0.0, 0.0], |a, (v, _)| [a[0] + v[0] / k, a[1] + v[1] / k]);
    verts.sort_by(|a, b| {
        let ta = libm::atan2(a.0[1] - c[1], a.0[0] - c[0]);
        let tb = libm::atan2(b.0[1] - c[1], b.0[0] - c[0]);
        ta.total_cmp(&tb)
    });
    let polygon: Vec<[f64; 2]> = verts.iter().map(|v| v.0).collect();
    let ideal: Vec<bool> = verts.iter().map(|v| v.1).collect();
    let (domains, exact_domain) = match quadric_domain(p) {
        Some(b) => {
            let (a, bl, cq) = chart.quadric(&b);
            (vec![ConvexBody::Quadric { a, b: bl, c: cq }; depths.len()], true)
        }
        None => (outer_domains(p, &chart, &polygon, depths)?, false),
    };
    Ok(VolumeProblem { chart, polygon, ideal, depths: depths.to_vec(), domains, exact_domain })
}

/// The outer approximations `O_N` for each requested depth.
pub fn outer_domains<F: Scalar>(
    p: &CoxeterPolytope<F>,
    chart: &Chart,
    polygon: &[[f64; 2]],
    depths: &[usize],
) -> Result<Vec<ConvexBody>, VolumeError> {
    let pf = p.to_f64();
    let alpha = pf.alphas();
    let phis: Vec<Vec<f64>> =
        dual_cone_rays(pf.cartan().matrix()).iter().map(|y| alpha.vec_mul(y)).collect();
    let max_depth = depths.iter().copied().max().unwrap_or(0);
    let tiling = expand_orbit(&pf, max_depth)?;
    let bound = 1e3 * polygon.iter().fold(1.0, |m, v| libm::fmax(m, libm::fmax(v[0].abs(), v[1].abs())));
    let mut out = Vec::with_capacity(depths.len());
    for &n in depths {
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for i in tiling.truncated(n) {
            let ginv = tiling.inverse(i);
            for phi in &phis {
                let cov = ginv.vec_mul(phi);
                let (nv, c) = chart.halfspace(&cov);
                let scale = norm_f64(&nv);
                if scale <= 1e-14 * libm::fmax(1.0, c.abs()) {
                    continue;
                }
                normals.push(nv.iter().map(|v| v / scale).collect::<Vec<f64>>());
                offsets.push(c / scale);
            }
        }
        let poly = halfplane_polygon(&normals, &offsets, bound);
        out.push(ConvexBody::polygon(&poly));
    }
    Ok(out)
}

/// Paired estimates at every depth of the problem, sharing sample points.
pub fn estimate_volumes(prob: &VolumeProblem, samples: usize, seed: u64) -> Result<Vec<VolumeEstimate>, VolumeError> {
    let shells: Vec<usize> = prob.depths.iter().map(|&n| 2 * n).collect();
    let max_shells = shells.iter().copied().max().unwrap_or(0);
    let region = StratifiedPolygon::new(&prob.polygon, &prob.ideal, max_shells);
    let r = integrate_densities(&prob.domains, &shells, &region, samples, seed)?;
    Ok(r
        .into_iter()
        .zip(&prob.depths)
        .map(|((value, stderr, paired, resampled), &depth)| VolumeEstimate {
            value,
            stderr,
            samples,
            depth,
            seed,
            resampled,
            paired_stderr: paired,
        })
        .collect())
}

/// Estimate at a single depth.
pub fn estimate_volume<F: Scalar>(p: &CoxeterPolytope<F>, depth: usize, samples: usize, seed: u64) -> Result<VolumeEstimate, VolumeError> {
    let prob = volume_problem(p, &[depth])?;
    Ok(estimate_volumes(&prob, samples, seed)?.remove(0))
}

/// Paired estimates at depths `1..=n`.
pub fn volume_sequence<F: Scalar>(p: &CoxeterPolytope<F>, n: usize, samples: usize, seed: u64) -> Result<Vec<VolumeEstimate>, VolumeError> {
    let depths: Vec<usize> = (1..=n.max(1)).collect();
    estimate_volumes(&volume_problem(p, &depths)?, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn dual_rays_of_product6() {
        let p = corpus::triangle_product_6().to_f64();
        let rays = dual_cone_rays(p.cartan().matrix());
        assert!(!rays.is_empty());
        let a = p.cartan().matrix();
        for y in &rays {
            assert!(y.iter().all(|&v| v >= -1e-12));
            assert!(a.vec_mul(y).iter().all(|&v| v <= 1e-12));
        }
        // (0, 1, 1) vanishes at the loxodromic vertex.
        assert!(rays.iter().any(|y| y[0].abs() < 1e-12 && (y[1] - y[2]).abs() < 1e-12));
    }

    #[test]
    fn outer_domains_contain_tiles_and_shrink() {
        let p = corpus::triangle_product_6();
        let prob = volume_problem(&p, &[0, 2, 4]).unwrap();
        assert!(!prob.exact_domain);
        let t = expand_orbit(&p.to_f64(), 4).unwrap();
        let d = crate::vinberg::domain_approx(&t).unwrap();
        let lvl = |b: &ConvexBody, y: &[f64]| b.level(y);
        for tile in d.tile_vertices.iter() {
            for v in tile {
                let y = prob.chart.to_chart(v).unwrap();
                for b in &prob.domains {
                    assert!(lvl(b, &y) <= 1e-9);
                }
            }
        }
        let areas: Vec<f64> = prob
            .domains
            .iter()
            .map(|b| match b {
                ConvexBody::Polytope { normals, offsets } => {
                    crate::geometry::polygon_area(&halfplane_polygon(normals, offsets, 1e6))
                }
                _ => unreachable!(),
            })
            .collect();
        assert!(areas[1] <= areas[0] && areas[2] <= areas[1]);
    }

    #[test]
    fn ideal_flags() {
        let prob = volume_problem(&corpus::ideal_triangle(), &[1]).unwrap();
        assert!(prob.exact_domain);
        assert_eq!(prob.ideal, vec![true; 3]);
        let prob = volume_problem(&corpus::triangle_237(), &[1]).unwrap();
        assert_eq!(prob.ideal, vec![false; 3]);
    }
}
