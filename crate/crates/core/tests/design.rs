use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use replicable_bandits::design::{
    approx_g_optimal, g_value, least_squares, linear_phase_budget, phase_allocation, solve_normal_equations, support_bound,
};
use replicable_bandits::environments::Dataset;
use replicable_bandits::experiments::unit_circle;
use replicable_bandits::schedule::eps_of_phase;

fn features(k: usize, d: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, k * d).prop_map(move |v| DMatrix::from_row_slice(k, d, &v))
}

fn cases() -> impl Strategy<Value = DMatrix<f64>> {
    (prop::sample::select(vec![2usize, 3, 5]), prop::sample::select(vec![5usize, 10, 50]))
        .prop_flat_map(|(d, k)| features(k, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn returned_designs_are_certified(x in cases()) {
        let all: Vec<usize> = (0..x.nrows()).collect();
        let w = approx_g_optimal(&x, &all).unwrap();
        let g = g_value(&w, &x, &all).unwrap();
        prop_assert!(g <= 2.0 * w.dim as f64, "g = {} for d' = {}", g, w.dim);
        prop_assert!((g - w.g_value).abs() <= 1e-9 * g.max(1.0));
        prop_assert!(g >= w.dim as f64 - 1e-9);
        prop_assert!(w.support.len() <= support_bound(w.dim));
        prop_assert!((w.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(w.weights.iter().all(|&p| p == 0.0 || p >= 1e-6));
    }

    #[test]
    fn subsets_are_certified_in_their_span(x in features(12, 3), mask in prop::collection::vec(any::<bool>(), 12)) {
        let active: Vec<usize> = (0..12).filter(|&i| mask[i]).collect();
        prop_assume!(!active.is_empty());
        let rows = DMatrix::from_fn(active.len(), 3, |r, c| x[(active[r], c)]);
        prop_assume!(rows.iter().any(|v| v.abs() > 1e-3));
        let w = approx_g_optimal(&x, &active).unwrap();
        prop_assert!(w.arms == active);
        let g = g_value(&w, &x, &active).unwrap();
        prop_assert!(g <= 2.0 * w.dim as f64 + 1e-9);
    }

    #[test]
    fn scaling_features_keeps_the_design(x in cases(), c in 0.01f64..100.0) {
        let all: Vec<usize> = (0..x.nrows()).collect();
        let a = approx_g_optimal(&x, &all).unwrap();
        let b = approx_g_optimal(&(&x * c), &all).unwrap();
        prop_assert_eq!(&a.support, &b.support);
        for (p, q) in a.weights.iter().zip(&b.weights) {
            prop_assert!((p - q).abs() < 1e-6);
        }
        prop_assert!((a.g_value - b.g_value).abs() < 1e-6 * a.g_value);
    }

    #[test]
    fn allocation_covers_budget(x in cases(), n in 1.0f64..10_000.0) {
        let all: Vec<usize> = (0..x.nrows()).collect();
        let w = approx_g_optimal(&x, &all).unwrap();
        let alloc = phase_allocation(&w, n);
        let total: u64 = alloc.iter().sum();
        prop_assert!(total as f64 >= n - 1e-9);
        prop_assert!(total as f64 <= n + w.support.len() as f64);
    }
}

#[test]
fn symmetric_bases_are_exact() {
    for d in [2, 3, 5, 8] {
        let x = DMatrix::identity(d, d);
        let all: Vec<usize> = (0..d).collect();
        let w = approx_g_optimal(&x, &all).unwrap();
        assert!((g_value(&w, &x, &all).unwrap() - d as f64).abs() < 1e-6);
        assert!(w.weights.iter().all(|&p| (p - 1.0 / d as f64).abs() < 1e-9));
        // +-e_i has the same optimum.
        let both = DMatrix::from_fn(2 * d, d, |r, c| if r % d == c { if r < d { 1.0 } else { -1.0 } } else { 0.0 });
        let all2: Vec<usize> = (0..2 * d).collect();
        let w = approx_g_optimal(&both, &all2).unwrap();
        assert!((g_value(&w, &both, &all2).unwrap() - d as f64).abs() < 1e-6);
    }
}

#[test]
fn least_squares_recovers_noiseless_theta() {
    let x = DMatrix::from_row_slice(5, 3, &[1.0, 0.0, 2.0, 0.5, 1.0, 0.0, -1.0, 0.3, 0.7, 0.0, 0.0, 1.0, 2.0, 2.0, 2.0]);
    let theta = DVector::from_vec(vec![0.3, -1.2, 2.5]);
    let y = &x * &theta;
    let got = least_squares(&x, &y).unwrap();
    assert!((got - theta).norm() < 1e-9);
}

#[test]
fn ill_conditioned_systems_are_refused() {
    let gram = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-14]);
    assert!(solve_normal_equations(&gram, &DVector::from_vec(vec![1.0, 1.0])).is_err());
    let singular = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
    assert!(least_squares(&singular, &DVector::from_vec(vec![1.0, 2.0])).is_err());
}

/// Phase-1 least squares on the unit-circle arms: the worst prediction error
/// exceeds `eps_1 sqrt(ln(1/delta)) / 2` with frequency at most `delta`.
#[test]
fn fixed_sample_error_bound() {
    let sigma = 0.5f64.sqrt();
    let inst = Arc::new(unit_circle(20, 0.1, sigma).unwrap());
    let lin = inst.linear_structure().unwrap().clone();
    let x = &lin.features;
    let all: Vec<usize> = (0..20).collect();
    let w = approx_g_optimal(x, &all).unwrap();
    let alloc = phase_allocation(&w, linear_phase_budget(1, 2.0, sigma, 2));
    let horizon = *alloc.iter().max().unwrap();

    let trials = 10_000;
    let eps = eps_of_phase(1, 2.0);
    let deltas = [0.1f64, 0.01];
    let mut exceed = [0usize; 2];
    for trial in 0..trials {
        let ds = Dataset::streaming(inst.clone(), horizon, trial as u64).unwrap();
        let mut gram = DMatrix::zeros(2, 2);
        let mut rhs = DVector::zeros(2);
        for (&arm, &n) in w.arms.iter().zip(&alloc) {
            let xa = lin.feature(arm);
            let sum: f64 = (0..n).map(|j| ds.reward_at(arm, j).unwrap()).sum();
            gram += n as f64 * &xa * xa.transpose();
            rhs += sum * &xa;
        }
        let theta_hat = solve_normal_equations(&gram, &rhs).unwrap();
        let err = (x * (&lin.theta - theta_hat)).amax();
        for (j, delta) in deltas.iter().enumerate() {
            if err > eps * (1.0 / delta).ln().sqrt() / 2.0 {
                exceed[j] += 1;
            }
        }
    }
    for (j, delta) in deltas.iter().enumerate() {
        let freq = exceed[j] as f64 / trials as f64;
        let se = (delta * (1.0 - delta) / trials as f64).sqrt();
        assert!(freq <= delta + 3.0 * se, "delta {delta}: {freq}");
    }
}
