use std::collections::BTreeSet;

use proptest::prelude::*;

use vinberg_core::corpus::{self, full_corpus};
use vinberg_core::matrix::dot;
use vinberg_core::polytope::{subsets_by_size, DEFAULT_MAX_FACETS as M};
use vinberg_core::{AnyPolytope, CoxeterPolytope, FaceKind, Matrix, MatrixType, Rational, Scalar};

/// Extreme rays of `{alpha_s(x) <= 0}` from explicit coordinates.
fn extreme_rays<F: Scalar>(p: &CoxeterPolytope<F>) -> Vec<Vec<F>> {
    let (n, m) = (p.num_facets(), p.ambient_dim());
    let alphas = p.alphas().to_rows();
    let mut rays: Vec<Vec<F>> = Vec::new();
    for sub in subsets_by_size(n).into_iter().filter(|s| s.len() == m - 1) {
        let rows: Vec<Vec<F>> = sub.iter().map(|&i| alphas[i].clone()).collect();
        let ker = Matrix::from_rows(&rows).kernel(p.eps());
        if ker.len() != 1 {
            continue;
        }
        for sign in [F::one(), -F::one()] {
            let r: Vec<F> = ker[0].iter().map(|c| c.clone() * sign.clone()).collect();
            if alphas.iter().all(|a| !dot(a, &r).is_pos(p.eps())) {
                rays.push(r);
            }
        }
    }
    rays
}

/// Facet sets of the nonempty faces, by closure in the ray/facet incidence.
fn brute_force_faces<F: Scalar>(p: &CoxeterPolytope<F>) -> BTreeSet<Vec<usize>> {
    let n = p.num_facets();
    let rays = extreme_rays(p);
    let zero = |s: usize, r: &[F]| dot(p.alpha(s), r).is_zero_eps(p.eps());
    let mut out = BTreeSet::new();
    for sub in subsets_by_size(n).into_iter().filter(|s| s.len() < n) {
        let on: Vec<&Vec<F>> = rays.iter().filter(|r| sub.iter().all(|&s| zero(s, r))).collect();
        if on.is_empty() {
            continue;
        }
        let closure: Vec<usize> = (0..n).filter(|&s| on.iter().all(|r| zero(s, r))).collect();
        if closure == sub {
            out.insert(sub);
        }
    }
    out
}

fn check_faces<F: Scalar>(name: &str, p: &CoxeterPolytope<F>) {
    let faces = p.enumerate_faces(M).unwrap();
    let got: BTreeSet<Vec<usize>> = faces.iter().map(|f| f.facets.clone()).collect();
    assert_eq!(got, brute_force_faces(p), "{name}");
    for sub in subsets_by_size(p.num_facets()).into_iter().filter(|s| s.len() < p.num_facets()) {
        assert_eq!(p.defines_face(&sub).is_some(), p.defines_face_dual(&sub), "{name} {sub:?}");
    }
    for f in &faces {
        let r = p.cartan().restrict(&f.facets);
        assert_eq!(f.link.matrix(), r.matrix(), "{name}");
        assert_eq!(p.classify_face(f), f.kind);
    }
}

/// Euclidean square and cube as explicit facet pairs.
fn box_polytope(d: usize) -> CoxeterPolytope<Rational> {
    let mut alphas = Vec::new();
    let mut polars = Vec::new();
    for i in 0..d {
        for sign in [1, -1] {
            let mut a = vec![Rational::zero(); d + 1];
            a[i] = Rational::from_i64(sign);
            a[d] = Rational::from_i64(-1);
            let mut v = vec![Rational::zero(); d + 1];
            v[i] = Rational::from_i64(2 * sign);
            alphas.push(a);
            polars.push(v);
        }
    }
    CoxeterPolytope::new(alphas, polars, 0.0).unwrap()
}

/// `(alpha g, g^{-1} v)` for an invertible `g`.
fn transformed(p: &CoxeterPolytope<Rational>, g: &Matrix<Rational>) -> CoxeterPolytope<Rational> {
    let gi = g.inverse(0.0).unwrap();
    let alphas = p.alphas().mul(g).to_rows();
    let polars = p.polars().mul(&gi.transpose()).to_rows();
    CoxeterPolytope::new(alphas, polars, 0.0).unwrap()
}

macro_rules! with_polytope {
    ($any:expr, $p:ident => $body:expr) => {
        match $any {
            AnyPolytope::Exact($p) => $body,
            AnyPolytope::Approx($p) => $body,
        }
    };
}

#[test]
fn corpus_face_lattices_match_brute_force() {
    for e in full_corpus() {
        with_polytope!(&e.polytope, p => check_faces(&e.name, p));
    }
    check_faces("square", &box_polytope(2));
    check_faces("cube", &box_polytope(3));
}

#[test]
fn square_and_cube_face_counts() {
    assert_eq!(brute_force_faces(&box_polytope(2)).len(), 9);
    assert_eq!(brute_force_faces(&box_polytope(3)).len(), 27);
}

#[test]
fn quasiperfect_negative_type_is_irreducible_of_full_rank() {
    for e in full_corpus() {
        with_polytope!(&e.polytope, p => {
            if p.is_quasiperfect(M).unwrap().holds && p.cartan().classify_type().is(MatrixType::Negative) {
                assert!(p.cartan().is_irreducible(), "{}", e.name);
                assert_eq!(p.cartan().rank(), p.ambient_dim(), "{}", e.name);
            }
        });
    }
}

/// Faces with infinite stabilizer whose closure contains no other such face
/// are exactly those with a perfect link.
fn check_maximal_boundary_faces<F: Scalar>(name: &str, p: &CoxeterPolytope<F>) {
    let faces = p.enumerate_faces(M).unwrap();
    let boundary: Vec<_> = faces.iter().filter(|f| !f.type_tag.is(MatrixType::Positive)).collect();
    for f in &boundary {
        // g lies in the closure of f exactly when S_f is a subset of S_g; f is
        // maximal when no boundary face has a strictly smaller facet set.
        let maximal = !boundary.iter().any(|g| g.facets.len() < f.facets.len() && g.facets.iter().all(|s| f.facets.contains(s)));
        let link = p.link(f).unwrap();
        assert_eq!(maximal, link.is_perfect(M).unwrap().holds, "{name} {:?}", f.facets);
    }
}

#[test]
fn maximal_boundary_faces_have_perfect_links() {
    for e in corpus::negative_corpus() {
        with_polytope!(&e.polytope, p => check_maximal_boundary_faces(&e.name, p));
    }
}

#[test]
fn vertices_of_the_product_six_triangle() {
    let p = corpus::triangle_product_6();
    let kinds: Vec<(Vec<usize>, FaceKind)> = p.vertices(M).unwrap().into_iter().map(|v| (v.facets, v.kind)).collect();
    assert_eq!(
        kinds,
        vec![
            (vec![0, 1], FaceKind::Elliptic),
            (vec![0, 2], FaceKind::Elliptic),
            (vec![1, 2], FaceKind::NegativeType { loxodromic: true }),
        ]
    );
}

fn invertible(entries: Vec<i64>, d: usize) -> Option<Matrix<Rational>> {
    let g = Matrix::from_fn(d, d, |i, j| Rational::from_i64(entries[i * d + j]) + if i == j { Rational::from_i64(3) } else { Rational::zero() });
    (!g.det().is_zero_eps(0.0)).then_some(g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn linear_images_of_boxes_keep_their_faces(d in 2usize..=3, entries in prop::collection::vec(-2i64..=2, 16)) {
        let Some(g) = invertible(entries, d + 1) else { return Ok(()) };
        let q = transformed(&box_polytope(d), &g);
        check_faces("box image", &q);
        prop_assert_eq!(q.enumerate_faces(M).unwrap().len(), if d == 2 { 9 } else { 27 });
    }
}
