use vinberg_core::corpus;
use vinberg_core::limit_set::{hull_gap, polar_span_residual, sample_limit_set, LimitSetSample};
use vinberg_core::vinberg::{expand_orbit, reflection};
use vinberg_core::volume::volume_problem;
use vinberg_core::{CoxeterPolytope, Matrix, Scalar};

fn triangles() -> Vec<(&'static str, CoxeterPolytope<f64>)> {
    vec![
        ("237", corpus::triangle_237()),
        ("23inf", corpus::triangle_23inf().to_f64()),
        ("ideal", corpus::ideal_triangle().to_f64()),
        ("product4_5", corpus::triangle_product_4_5().to_f64()),
        ("product6", corpus::triangle_product_6().to_f64()),
        ("product9", corpus::triangle_product_9().to_f64()),
    ]
}

fn word_matrix(p: &CoxeterPolytope<f64>, word: &[usize]) -> Matrix<f64> {
    let m = p.ambient_dim();
    word.iter().fold(Matrix::identity(m), |g, &s| g.mul(&reflection(p, s)))
}

fn check_witnesses(name: &str, p: &CoxeterPolytope<f64>, s: &LimitSetSample) {
    assert!(!s.points.is_empty(), "{name}");
    for q in &s.points {
        assert!(q.residual <= 1e-8, "{name} {:?}: {}", q.word, q.residual);
        // Recompute the residual from the word alone.
        let g = word_matrix(p, &q.word);
        let gx = g.mul_vec(&q.point);
        let r = gx.iter().zip(&q.point).map(|(a, b)| (a - q.eigenvalue * b).powi(2)).sum::<f64>().sqrt();
        assert!(r / q.eigenvalue.abs() <= 1e-8, "{name} {:?}", q.word);
        assert!(q.eigenvalue.abs() > 1.0 + 1e-9, "{name}");
        assert!(polar_span_residual(p, &q.point) < 1e-8, "{name}");
    }
}

#[test]
fn fixed_points_are_certified_by_their_words() {
    for (name, p) in triangles() {
        let s = sample_limit_set(&p, 10, 300, 21).unwrap();
        check_witnesses(name, &p, &s);
    }
    let t = corpus::tetrahedron_344();
    let s = sample_limit_set(&t, 8, 200, 4).unwrap();
    check_witnesses("344", &t.to_f64(), &s);
}

#[test]
fn sampling_is_deterministic() {
    let p = corpus::triangle_product_6();
    assert_eq!(sample_limit_set(&p, 9, 200, 5).unwrap(), sample_limit_set(&p, 9, 200, 5).unwrap());
}

/// Limit points avoid the interior of every tile.
#[test]
fn limit_points_are_not_inside_tiles() {
    for (name, p) in triangles() {
        let s = sample_limit_set(&p, 10, 200, 8).unwrap();
        let t = expand_orbit(&p, 5).unwrap();
        for q in &s.points {
            for i in 0..t.len() {
                let v = t.tile_covectors(i).mul_vec(&q.point);
                let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                assert!(v.iter().any(|x| *x >= -1e-9 * scale), "{name}: {:?} inside tile {i}", q.word);
            }
        }
    }
}

/// Limit points stay in the closure of the outer approximation of the domain.
#[test]
fn limit_points_lie_in_the_outer_domain() {
    for (name, p) in triangles() {
        let prob = volume_problem(&p, &[3, 6]).unwrap();
        let s = sample_limit_set(&p, 10, 300, 13).unwrap();
        for q in &s.points {
            for body in &prob.domains {
                let l = body.level(&q.chart);
                assert!(l <= 1e-7 * (1.0 + q.chart.iter().map(|c| c.abs()).sum::<f64>()), "{name}: {l}");
            }
        }
    }
}

#[test]
fn hull_gap_shrinks_for_the_ideal_triangle() {
    let p = corpus::ideal_triangle();
    let s = sample_limit_set(&p, 12, 1500, 11).unwrap();
    let gaps: Vec<f64> = [3, 5, 7].iter().map(|&n| hull_gap(&p, &s, n).unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12) && gaps[2] < gaps[0], "{gaps:?}");
    assert!(gaps[2] < 0.02, "{gaps:?}");
}

#[test]
fn hull_gap_stalls_above_a_loxodromic_vertex() {
    let p = corpus::triangle_product_6();
    let s = sample_limit_set(&p, 12, 1500, 11).unwrap();
    let gaps: Vec<f64> = [4, 6].iter().map(|&n| hull_gap(&p, &s, n).unwrap()).collect();
    assert!(gaps.iter().all(|&g| g > 0.5), "{gaps:?}");
}
