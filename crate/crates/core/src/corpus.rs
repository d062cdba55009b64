//! Named example polytopes and a seeded generator of random ones.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{CartanMatrix, MatrixType, Order};
use crate::coxeter::CoxeterMatrix;
use crate::polytope::{AnyPolytope, CoxeterPolytope};
use crate::scalar::{Rational, Scalar, DEFAULT_EPS};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_frac(n, d)
}

fn cartan_q(rows: &[&[(i64, i64)]]) -> CartanMatrix<Rational> {
    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect();
    CartanMatrix::from_rows(&rows, 0.0).expect("corpus matrix is a Cartan matrix")
}

fn cartan_i(rows: &[&[i64]]) -> CartanMatrix<Rational> {
    let rows: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect();
    CartanMatrix::from_rows(&rows, 0.0).expect("corpus matrix is a Cartan matrix")
}

fn coxeter(rows: &[&[u32]]) -> CoxeterMatrix {
    let rows: Vec<Vec<Order>> =
        rows.iter().map(|r| r.iter().map(|&m| if m == 0 { Order::Infinite } else { Order::Finite(m) }).collect()).collect();
    CoxeterMatrix::new(&rows).expect("corpus Coxeter matrix is valid")
}

/// Tits polytope of the `(2,3,7)` triangle group, in floating point.
pub fn triangle_237() -> CoxeterPolytope<f64> {
    let m = coxeter(&[&[1, 2, 3], &[2, 1, 7], &[3, 7, 1]]);
    CoxeterPolytope::tits(&m.gram_approx(DEFAULT_EPS))
}

/// `(2,3,inf)`: one parabolic vertex.
pub fn triangle_23inf() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, 0, -1], &[0, 2, -2], &[-1, -2, 2]]))
}

/// `(inf,inf,inf)` with all products exactly 4: the ideal triangle.
pub fn ideal_triangle() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]]))
}

/// Triangle with `m_12 = 3`, `m_13 = 2` and `A_23 A_32 = product`, where the
/// product is given as `A_23 = -a`, `A_32 = -b`.
fn loxodromic_triangle(a: (i64, i64), b: (i64, i64)) -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_q(&[
        &[(2, 1), (-1, 1), (0, 1)],
        &[(-1, 1), (2, 1), (-a.0, a.1)],
        &[(0, 1), (-b.0, b.1), (2, 1)],
    ]))
}

/// Product 9/2 at the vertex `{1, 2}` (0-based).
pub fn triangle_product_4_5() -> CoxeterPolytope<Rational> {
    loxodromic_triangle((3, 1), (3, 2))
}

/// Product 6 at the vertex `{1, 2}` (0-based).
pub fn triangle_product_6() -> CoxeterPolytope<Rational> {
    loxodromic_triangle((3, 1), (2, 1))
}

/// Product 9 at the vertex `{1, 2}` (0-based).
pub fn triangle_product_9() -> CoxeterPolytope<Rational> {
    loxodromic_triangle((3, 1), (3, 1))
}

/// Negative-type simplex whose Coxeter group is affine `A~_2`.
pub fn affine_a2_simplex() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_q(&[
        &[(2, 1), (-2, 1), (-1, 2)],
        &[(-1, 2), (2, 1), (-2, 1)],
        &[(-2, 1), (-1, 2), (2, 1)],
    ]))
}

/// Negative-type segment with product 9.
pub fn segment() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, -3], &[-3, 2]]))
}

/// Noncompact tetrahedron `[3,4,4]` with one ideal vertex.
pub fn tetrahedron_344() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, -1, 0, 0], &[-1, 2, -1, 0], &[0, -2, 2, -1], &[0, 0, -2, 2]]))
}

/// Noncompact tetrahedron `[3,3,6]` with one ideal vertex.
pub fn tetrahedron_336() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, -1, 0, 0], &[-1, 2, -1, 0], &[0, -1, 2, -1], &[0, 0, -3, 2]]))
}

/// Compact tetrahedron `[3,5,3]`, in floating point.
pub fn tetrahedron_353() -> CoxeterPolytope<f64> {
    let m = coxeter(&[&[1, 3, 2, 2], &[3, 1, 5, 2], &[2, 5, 1, 3], &[2, 2, 3, 1]]);
    CoxeterPolytope::tits(&m.gram_approx(DEFAULT_EPS))
}

/// Finite `A_2`, of positive type.
pub fn a2() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, -1], &[-1, 2]]))
}

/// Affine `A~_1`, of zero type.
pub fn affine_a1() -> CoxeterPolytope<Rational> {
    CoxeterPolytope::tits(&cartan_i(&[&[2, -2], &[-2, 2]]))
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub polytope: AnyPolytope,
}

fn entry(name: &str, p: AnyPolytope) -> CorpusEntry {
    CorpusEntry { name: name.into(), polytope: p }
}

/// The hand-built negative-type corpus.
pub fn negative_corpus() -> Vec<CorpusEntry> {
    use AnyPolytope::{Approx, Exact};
    vec![
        entry("triangle237", Approx(triangle_237())),
        entry("triangle23inf", Exact(triangle_23inf())),
        entry("ideal_triangle", Exact(ideal_triangle())),
        entry("product4_5", Exact(triangle_product_4_5())),
        entry("product6vertex", Exact(triangle_product_6())),
        entry("product9", Exact(triangle_product_9())),
        entry("affine_a2_simplex", Exact(affine_a2_simplex())),
        entry("segment", Exact(segment())),
        entry("join_ideal_ideal", Exact(ideal_triangle().join(&ideal_triangle()))),
        entry("join_ideal_product6", Exact(ideal_triangle().join(&triangle_product_6()))),
        entry("tetrahedron344", Exact(tetrahedron_344())),
        entry("tetrahedron336", Exact(tetrahedron_336())),
        entry("tetrahedron353", Approx(tetrahedron_353())),
    ]
}

/// The negative-type corpus plus positive and zero type controls.
pub fn full_corpus() -> Vec<CorpusEntry> {
    let mut c = negative_corpus();
    c.push(entry("a2", AnyPolytope::Exact(a2())));
    c.push(entry("affine_a1", AnyPolytope::Exact(affine_a1())));
    c
}

/// Admissible factorizations `(A_st, A_ts)` of each product, as negated
/// fractions.
const FACTORS: &[((i64, i64), (i64, i64))] = &[
    ((1, 1), (1, 1)),
    ((2, 1), (1, 2)),
    ((1, 1), (2, 1)),
    ((2, 1), (1, 1)),
    ((3, 1), (1, 1)),
    ((1, 1), (3, 1)),
    ((2, 1), (2, 1)),
    ((4, 1), (1, 1)),
    ((3, 1), (3, 2)),
    ((3, 1), (2, 1)),
    ((3, 1), (3, 1)),
    ((5, 2), (2, 1)),
];

/// Random valid Cartan matrix with `n` generators, of any type.
///
/// Labels are drawn from `m in {2, 3, 4, 6, inf}`; each pair is left
/// commuting with probability 1/4.
pub fn random_cartan(rng: &mut ChaCha8Rng, n: usize) -> CartanMatrix<Rational> {
    let mut m = vec![vec![q(0, 1); n]; n];
    for (s, row) in m.iter_mut().enumerate() {
        row[s] = q(2, 1);
    }
    for s in 0..n {
        for t in s + 1..n {
            if rng.gen_bool(0.25) {
                continue;
            }
            let ((a, b), (c, d)) = FACTORS[rng.gen_range(0..FACTORS.len())];
            let (st, ts) = if rng.gen_bool(0.5) { ((a, b), (c, d)) } else { ((c, d), (a, b)) };
            m[s][t] = q(-st.0, st.1);
            m[t][s] = q(-ts.0, ts.1);
        }
    }
    CartanMatrix::from_rows(&m, 0.0).expect("admissible factors give a Cartan matrix")
}

/// Random irreducible Cartan matrix of negative type, by rejection.
pub fn random_negative_cartan(rng: &mut ChaCha8Rng, n: usize) -> CartanMatrix<Rational> {
    loop {
        let a = random_cartan(rng, n);
        if a.is_irreducible() && a.classify_type().is(MatrixType::Negative) {
            return a;
        }
    }
}

/// `count` seeded random negative-type Tits polytopes with 3 to 5 facets.
pub fn random_negative_polytopes(seed: u64, count: usize) -> Vec<CoxeterPolytope<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(3..=5);
            CoxeterPolytope::tits(&random_negative_cartan(&mut rng, n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::MatrixType;

    #[test]
    fn corpus_types() {
        for e in negative_corpus() {
            let p = e.polytope.to_f64();
            assert!(p.cartan().classify_type().is(MatrixType::Negative), "{}", e.name);
        }
        assert!(a2().cartan().classify_type().is(MatrixType::Positive));
        assert!(affine_a1().cartan().classify_type().is(MatrixType::Zero));
    }

    #[test]
    fn random_generator_is_seeded() {
        let a = random_negative_polytopes(7, 5);
        let b = random_negative_polytopes(7, 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.cartan().classify_type().is(MatrixType::Negative)));
    }
}
