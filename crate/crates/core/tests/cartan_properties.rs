use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use vinberg_core::cartan::MatrixType;
use vinberg_core::corpus::random_cartan;
use vinberg_core::eigen::eigenvalues;
use vinberg_core::lp::{LinearProgram, LpOutcome, Relation};
use vinberg_core::scalar::DEFAULT_EPS;
use vinberg_core::{CartanMatrix, Matrix, Rational, Scalar};

fn cartan(seed: u64, n: usize) -> CartanMatrix<Rational> {
    random_cartan(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

fn permuted(a: &CartanMatrix<Rational>, perm: &[usize]) -> CartanMatrix<Rational> {
    let n = a.size();
    let rows: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| a.entry(perm[i], perm[j]).clone()).collect()).collect();
    CartanMatrix::from_rows(&rows, 0.0).unwrap()
}

/// `2 - rho(2I - A)` from a dense eigenvalue solver.
fn eigen_lambda(a: &CartanMatrix<Rational>) -> f64 {
    let n = a.size();
    let m = Matrix::from_fn(n, n, |i, j| if i == j { 2.0 } else { 0.0 } - a.entry(i, j).to_f64());
    let ev = eigenvalues(&m).expect("small matrices converge");
    2.0 - libm::hypot(ev[0].0, ev[0].1)
}

/// Is there `X >= 0`, `sum X = 1`, with `A X >= 0`?
fn nonneg_kernel_witness(a: &CartanMatrix<Rational>) -> bool {
    let n = a.size();
    let mut lp = LinearProgram::new(vec![false; n], vec![Rational::zero(); n]);
    for i in 0..n {
        lp.add((0..n).map(|j| a.entry(i, j).clone()).collect(), Relation::Ge, Rational::zero());
    }
    lp.add(vec![Rational::one(); n], Relation::Eq, Rational::one());
    matches!(lp.solve(0.0), LpOutcome::Optimal { .. })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn type_is_permutation_invariant(seed in any::<u64>(), n in 2usize..=5, rot in 0usize..5) {
        let a = cartan(seed, n);
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).rev().collect();
        let b = permuted(&a, &perm);
        prop_assert_eq!(a.classify_type().overall, b.classify_type().overall);
    }

    #[test]
    fn witness_matches_type(seed in any::<u64>(), n in 2usize..=5) {
        let a = cartan(seed, n);
        let tag = a.classify_type();
        prop_assume!(a.is_irreducible());
        let w = a.witness_vector().unwrap();
        prop_assert!(w.x.iter().all(|x| x.is_pos(0.0)));
        for v in &w.ax {
            let ok = match tag.overall {
                MatrixType::Positive => v.is_pos(0.0),
                MatrixType::Zero => v.is_zero_eps(0.0),
                MatrixType::Negative => v.is_neg(0.0),
                MatrixType::Mixed => false,
            };
            prop_assert!(ok, "{:?} {:?}", tag.overall, w.ax);
        }
    }

    #[test]
    fn nonnegative_solution_excludes_negative_type(seed in any::<u64>(), n in 2usize..=5) {
        let a = cartan(seed, n);
        prop_assume!(a.is_irreducible());
        if nonneg_kernel_witness(&a) {
            prop_assert!(!a.classify_type().is(MatrixType::Negative));
        }
    }

    #[test]
    fn exact_and_approx_agree_above_margin(seed in any::<u64>(), n in 2usize..=5) {
        let a = cartan(seed, n);
        let approx = a.to_f64().with_eps(DEFAULT_EPS);
        let (te, ta) = (a.classify_type(), approx.classify_type());
        if ta.min_margin() > 10.0 * DEFAULT_EPS {
            prop_assert_eq!(te.overall, ta.overall);
        }
    }
}

#[test]
fn proper_subsystems_of_nonnegative_types_are_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for i in 0..3000 {
        let n = 2 + i % 4;
        let a = random_cartan(&mut rng, n);
        if !a.is_irreducible() || a.classify_type().is(MatrixType::Negative) {
            continue;
        }
        for mask in 1u32..(1 << n) - 1 {
            let t: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            assert!(a.restrict(&t).classify_type().is(MatrixType::Positive), "{:?} {:?}", a.matrix(), t);
        }
        checked += 1;
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn exact_classifier_matches_eigen_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for i in 0..1000 {
        let n = 2 + i % 4;
        let a = random_cartan(&mut rng, n);
        if !a.is_irreducible() {
            continue;
        }
        let lambda = eigen_lambda(&a);
        // Inside the tolerance band the float oracle has no opinion.
        if lambda.abs() <= 10.0 * DEFAULT_EPS {
            continue;
        }
        let expect = if lambda > 0.0 { MatrixType::Positive } else { MatrixType::Negative };
        assert_eq!(a.classify_type().overall, expect, "{:?}", a.matrix());
        checked += 1;
    }
    assert!(checked > 500);
}
