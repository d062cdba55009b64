use std::f64::consts::PI;

use vinberg_core::corpus;
use vinberg_core::volume::{estimate_volume, estimate_volumes, volume_problem};

/// Hyperbolic area of a triangle with angles `pi/a, pi/b, pi/c`.
fn angle_defect(a: f64, b: f64, c: f64) -> f64 {
    PI * (1.0 - 1.0 / a - 1.0 / b - 1.0 / c)
}

#[test]
fn compact_triangle_has_its_hyperbolic_area() {
    let est = estimate_volume(&corpus::triangle_237(), 6, 200_000, 1).unwrap();
    let target = angle_defect(2.0, 3.0, 7.0);
    assert!((est.value - target).abs() < 4.0 * est.stderr + 1e-3 * target, "{est:?} vs {target}");
}

#[test]
fn ideal_triangle_has_area_pi() {
    let est = estimate_volume(&corpus::ideal_triangle(), 8, 200_000, 2).unwrap();
    assert!((est.value - PI).abs() < 0.01 * PI, "{est:?}");
}

#[test]
fn cusped_triangle_has_its_hyperbolic_area() {
    let est = estimate_volume(&corpus::triangle_23inf(), 8, 200_000, 3).unwrap();
    let target = angle_defect(2.0, 3.0, f64::INFINITY);
    assert!((est.value - target).abs() < 0.01 * target, "{est:?} vs {target}");
}

#[test]
fn loxodromic_vertex_makes_estimates_grow() {
    let prob = volume_problem(&corpus::triangle_product_6(), &[2, 4, 6]).unwrap();
    assert!(!prob.exact_domain);
    let est = estimate_volumes(&prob, 60_000, 4).unwrap();
    for w in est.windows(2) {
        let se = w[1].paired_stderr.unwrap();
        assert!(w[1].value - w[0].value > 3.0 * se, "{est:?}");
    }
}
