use proptest::prelude::*;

use vinberg_core::coxeter::AnyCartan;
use vinberg_core::scalar::DEFAULT_EPS;
use vinberg_core::{CoxeterMatrix, GroupKind, Order};

const LABELS: [Order; 7] = [
    Order::Finite(2),
    Order::Finite(3),
    Order::Finite(4),
    Order::Finite(5),
    Order::Finite(6),
    Order::Finite(7),
    Order::Infinite,
];

fn build(n: usize, labels: &[usize]) -> CoxeterMatrix {
    let mut rows = vec![vec![Order::Finite(1); n]; n];
    let mut k = 0;
    for s in 0..n {
        for t in s + 1..n {
            rows[s][t] = LABELS[labels[k] % LABELS.len()];
            rows[t][s] = rows[s][t];
            k += 1;
        }
    }
    CoxeterMatrix::new(&rows).unwrap()
}

fn coxeter_matrix() -> impl Strategy<Value = CoxeterMatrix> {
    (2usize..=5).prop_flat_map(|n| prop::collection::vec(0usize..LABELS.len(), n * (n - 1) / 2).prop_map(move |l| build(n, &l)))
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// Diagram with the listed labelled edges (0 for inf); other pairs commute.
fn diagram(n: usize, edges: &[(usize, usize, u32)]) -> CoxeterMatrix {
    let mut rows = vec![vec![Order::Finite(2); n]; n];
    for (s, row) in rows.iter_mut().enumerate() {
        row[s] = Order::Finite(1);
    }
    for &(s, t, m) in edges {
        let o = if m == 0 { Order::Infinite } else { Order::Finite(m) };
        rows[s][t] = o;
        rows[t][s] = o;
    }
    CoxeterMatrix::new(&rows).unwrap()
}

fn affine_diagrams() -> Vec<(&'static str, CoxeterMatrix)> {
    vec![
        ("A~1", diagram(2, &[(0, 1, 0)])),
        ("A~2", diagram(3, &[(0, 1, 3), (1, 2, 3), (2, 0, 3)])),
        ("A~3", diagram(4, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 0, 3)])),
        ("A~4", diagram(5, &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 0, 3)])),
        ("C~2", diagram(3, &[(0, 1, 4), (1, 2, 4)])),
        ("G~2", diagram(3, &[(0, 1, 6), (1, 2, 3)])),
        ("C~3", diagram(4, &[(0, 1, 4), (1, 2, 3), (2, 3, 4)])),
        ("B~3", diagram(4, &[(0, 2, 3), (1, 2, 3), (2, 3, 4)])),
        ("C~4", diagram(5, &[(0, 1, 4), (1, 2, 3), (2, 3, 3), (3, 4, 4)])),
        ("B~4", diagram(5, &[(0, 2, 3), (1, 2, 3), (2, 3, 3), (3, 4, 4)])),
        ("D~4", diagram(5, &[(0, 2, 3), (1, 2, 3), (3, 2, 3), (4, 2, 3)])),
        ("F~4", diagram(5, &[(0, 1, 3), (1, 2, 3), (2, 3, 4), (3, 4, 3)])),
    ]
}

#[test]
fn affine_diagrams_are_affine_with_spherical_subdiagrams() {
    for (name, m) in affine_diagrams() {
        assert!(m.classify_group(DEFAULT_EPS).is(GroupKind::Affine), "{name}");
        let n = m.size();
        for t in subsets(n).filter(|t| !t.is_empty() && t.len() < n) {
            assert!(m.restrict(&t).classify_group(DEFAULT_EPS).is(GroupKind::Spherical), "{name} {t:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gram_is_a_symmetric_cartan_matrix(m in coxeter_matrix()) {
        let g = m.gram_approx(DEFAULT_EPS);
        prop_assert!(g.is_symmetric());
        if let AnyCartan::Exact(q) = AnyCartan::gram(&m, false, DEFAULT_EPS) {
            prop_assert!(q.is_symmetric());
            prop_assert_eq!(CoxeterMatrix::from_cartan(&q), m.clone());
        }
        prop_assert_eq!(CoxeterMatrix::from_cartan(&g), m);
    }

    #[test]
    fn perp_is_antitone_and_double_perp_grows(m in coxeter_matrix(), a in any::<u32>(), b in any::<u32>()) {
        let n = m.size();
        let t1: Vec<usize> = (0..n).filter(|i| a >> i & 1 == 1).collect();
        let t2: Vec<usize> = (0..n).filter(|i| a >> i & 1 == 1 || b >> i & 1 == 1).collect();
        let pp = m.orthogonal_complement(&m.orthogonal_complement(&t1));
        prop_assert!(t1.iter().all(|s| pp.contains(s)));
        let (p1, p2) = (m.orthogonal_complement(&t1), m.orthogonal_complement(&t2));
        prop_assert!(p2.iter().all(|s| p1.contains(s)));
    }
}
