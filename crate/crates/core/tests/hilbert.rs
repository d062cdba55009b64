use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vinberg_core::geometry::{convex_hull_2d, ConvexBody};
use vinberg_core::hilbert::{busemann_density, finsler_norm, hilbert_distance, monotonicity_probe, unit_ball_area_quadrature};
use vinberg_core::Matrix;

/// Regular-ish convex polygon with jittered radii, counterclockwise.
fn polygon(k: usize, jitter: &[f64]) -> Vec<[f64; 2]> {
    let pts: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
            let r = 1.0 + 0.2 * jitter[i];
            [r * th.cos(), r * th.sin()]
        })
        .collect();
    convex_hull_2d(&pts)
}

fn project(h: &[[f64; 3]; 3], p: [f64; 2]) -> [f64; 2] {
    let v = [p[0], p[1], 1.0];
    let r: Vec<f64> = h.iter().map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
    [r[0] / r[2], r[1] / r[2]]
}

/// Klein model: `cosh d = (1 - x.y) / sqrt((1 - |x|^2)(1 - |y|^2))`.
fn klein_distance(x: [f64; 2], y: [f64; 2]) -> f64 {
    let dot = x[0] * y[0] + x[1] * y[1];
    let nx = x[0] * x[0] + x[1] * x[1];
    let ny = y[0] * y[0] + y[1] * y[1];
    ((1.0 - dot) / ((1.0 - nx) * (1.0 - ny)).sqrt()).acosh()
}

fn point() -> impl Strategy<Value = [f64; 2]> {
    (-0.6f64..0.6, -0.6f64..0.6).prop_map(|(a, b)| [a, b])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn disk_distance_matches_the_klein_model(x in point(), y in point()) {
        let d = hilbert_distance(&ConvexBody::ball(2, 1.0), &x, &y).unwrap();
        prop_assert!((d - klein_distance(x, y)).abs() < 1e-9 * (1.0 + d));
    }

    #[test]
    fn distance_is_projectively_invariant(
        jitter in prop::collection::vec(-1.0f64..1.0, 7),
        k in 3usize..=7,
        x in point(),
        y in point(),
        persp in (-0.2f64..0.2, -0.2f64..0.2),
        lin in prop::collection::vec(-0.3f64..0.3, 4),
    ) {
        let poly = polygon(k, &jitter);
        let body = ConvexBody::polygon(&poly);
        prop_assume!(body.contains(&x) && body.contains(&y));
        let h = [
            [1.0 + lin[0], lin[1], 0.1],
            [lin[2], 1.0 + lin[3], -0.1],
            [persp.0, persp.1, 1.0],
        ];
        let image: Vec<[f64; 2]> = poly.iter().map(|&p| project(&h, p)).collect();
        let image = convex_hull_2d(&image);
        prop_assume!(image.len() == poly.len());
        let d0 = hilbert_distance(&body, &x, &y).unwrap();
        let d1 = hilbert_distance(&ConvexBody::polygon(&image), &project(&h, x), &project(&h, y)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0), "{} vs {}", d0, d1);
    }

    #[test]
    fn triangle_inequality(jitter in prop::collection::vec(-1.0f64..1.0, 6), x in point(), y in point(), z in point()) {
        let body = ConvexBody::polygon(&polygon(6, &jitter));
        prop_assume!([x, y, z].iter().all(|p| body.contains(p)));
        let d = |a: [f64; 2], b: [f64; 2]| hilbert_distance(&body, &a, &b).unwrap();
        prop_assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-9);
        prop_assert!((d(x, y) - d(y, x)).abs() < 1e-9);
    }

    #[test]
    fn finsler_norm_is_homogeneous_and_symmetric(x in point(), w in (-2.0f64..2.0, -2.0f64..2.0), t in 0.1f64..5.0) {
        let body = ConvexBody::ball(2, 1.0);
        prop_assume!(w.0.abs() + w.1.abs() > 1e-3);
        let f = finsler_norm(&body, &x, &[w.0, w.1]).unwrap();
        let g = finsler_norm(&body, &x, &[-t * w.0, -t * w.1]).unwrap();
        prop_assert!((g - t * f).abs() < 1e-9 * (1.0 + g));
    }
}

/// `pi / Leb(B_x)` with the unit ball area estimated by rejection sampling.
fn density_by_rejection(body: &ConvexBody, x: &[f64], samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Every unit vector has norm at least 1/diameter-ish; a box of half width R
    // contains the Finsler ball once F(w) >= |w| / R.
    let r = 4.0;
    let mut hits = 0usize;
    for _ in 0..samples {
        let w = [rng.gen_range(-r..r), rng.gen_range(-r..r)];
        if finsler_norm(body, x, &w).unwrap() < 1.0 {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let area = p * 4.0 * r * r;
    let se = (p * (1.0 - p) / samples as f64).sqrt() * 4.0 * r * r;
    (std::f64::consts::PI / area, std::f64::consts::PI * se / (area * area))
}

#[test]
fn density_closed_form_matches_quadrature_and_sampling() {
    let bodies = [
        ConvexBody::ball(2, 1.0),
        ConvexBody::ellipsoid(&Matrix::from_rows(&[vec![1.0, 0.3], vec![0.3, 2.0]]), &[0.1, -0.1]),
        ConvexBody::polygon(&polygon(5, &[0.0, 0.5, -0.5, 0.2, 0.1])),
        ConvexBody::polygon(&[[-1.0, -1.0], [1.0, -1.0], [0.0, 1.5]]),
    ];
    for (i, body) in bodies.iter().enumerate() {
        for x in [[0.0, 0.0], [0.2, -0.1], [-0.3, 0.25]] {
            if !body.contains(&x) {
                continue;
            }
            let closed = busemann_density(body, &x).unwrap();
            let quad = std::f64::consts::PI / unit_ball_area_quadrature(body, &x, 14).unwrap();
            assert!((closed - quad).abs() < 1e-6 * closed, "body {i} at {x:?}: {closed} vs {quad}");
            let (mc, se) = density_by_rejection(body, &x, 200_000, 7 + i as u64);
            assert!((closed - mc).abs() < 3.0 * se + 1e-12, "body {i} at {x:?}: {closed} vs {mc} +- {se}");
        }
    }
    assert!((busemann_density(&ConvexBody::ball(2, 1.0), &[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn density_is_pointwise_monotone_under_inclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let outer = ConvexBody::ball(2, 1.5);
    let inner = ConvexBody::polygon(&polygon(6, &[0.0; 6]));
    for _ in 0..500 {
        let x = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
        if inner.contains(&x) {
            assert!(busemann_density(&inner, &x).unwrap() >= busemann_density(&outer, &x).unwrap() - 1e-12);
        }
    }
}

#[test]
fn nested_domains_give_larger_volume_inside() {
    let region = [[-0.3, -0.3], [0.3, -0.3], [0.3, 0.3], [-0.3, 0.3]];
    let pairs = [
        (ConvexBody::polygon(&polygon(5, &[0.0; 5])), ConvexBody::ball(2, 1.5)),
        (ConvexBody::ball(2, 0.8), ConvexBody::polygon(&[[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]])),
        (ConvexBody::polygon(&[[-0.6, -0.6], [1.5, -0.6], [-0.6, 1.5]]), ConvexBody::ball(2, 2.0)),
    ];
    for (k, (inner, outer)) in pairs.iter().enumerate() {
        let r = monotonicity_probe(inner, outer, &region, 20_000, 3).unwrap();
        assert!(r.inner.value >= r.outer.value - 3.0 * r.diff_stderr, "pair {k}: {:?}", r);
    }
    // Swapped arguments violate nesting.
    assert!(monotonicity_probe(&ConvexBody::ball(2, 1.5), &ConvexBody::ball(2, 0.35), &region, 100, 1).is_err());
}
