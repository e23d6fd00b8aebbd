//! Invariant suites; each check also runs inside the acceptance gate.

mod common;

use common::*;
use proptest::prelude::*;
use wisfbm::{
    fbm_covariance, sample_fbm_path, solve_endpoint, subsample_path, tilde_j, tilde_j_inverse_at_anchor, Drift64,
    SdeProblem64, SeedSpec, SolverKind, TimeGrid64,
};

#[test]
fn power_difference_bound() {
    check_power_difference_bound().unwrap();
}

#[test]
fn reciprocity() {
    check_reciprocity().unwrap();
}

#[test]
fn wick_unit_mean() {
    check_wick_unit_mean().unwrap();
}

#[test]
fn positivity() {
    check_positivity().unwrap();
}

#[test]
fn alpha_zero_coincidence() {
    check_alpha_zero_coincidence().unwrap();
}

#[test]
fn path_endpoint_consistency() {
    check_path_endpoint_consistency().unwrap();
}

#[test]
fn determinism() {
    check_determinism().unwrap();
}

proptest! {
    #[test]
    fn covariance_diagonal_and_symmetry(h in 0.01f64..0.99, t in 0.0f64..10.0, s in 0.0f64..10.0) {
        let c_tt = fbm_covariance(hurst(h), t, t).unwrap();
        prop_assert!((c_tt - t.powf(2.0 * h)).abs() <= 1e-12 * (1.0 + c_tt));
        prop_assert_eq!(fbm_covariance(hurst(h), t, s).unwrap(), fbm_covariance(hurst(h), s, t).unwrap());
    }

    #[test]
    fn tilde_j_positive(
        h in 0.01f64..0.99, alpha in -5.0f64..5.0, beta in -5.0f64..5.0,
        anchor in 0.0f64..2.0, frac in 0.0f64..=1.0, b in -10.0f64..10.0,
    ) {
        let p = SdeProblem64::new(alpha, beta, 1.0, 2.0, hurst(h), Drift64::zero()).unwrap();
        let j = tilde_j(&p, anchor, anchor * frac, b).unwrap();
        let inv = tilde_j_inverse_at_anchor(&p, anchor, b).unwrap();
        prop_assert!(j > 0.0 && j.is_finite());
        prop_assert!(inv > 0.0 && inv.is_finite());
    }

    #[test]
    fn subsample_composes(h in 0.05f64..0.95, a in 1usize..5, b in 1usize..5, seed in any::<u64>()) {
        let n = a * b * 4;
        let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.5, n).unwrap(), SeedSpec::new(seed, 0)).unwrap();
        let two = subsample_path(&subsample_path(&path, a).unwrap(), b).unwrap();
        let one = subsample_path(&path, a * b).unwrap();
        prop_assert_eq!(two, one);
    }

    #[test]
    fn schemes_exact_without_drift(
        h in 0.05f64..0.95, alpha in -2.0f64..2.0, beta in -2.0f64..2.0, n in 1usize..40, seed in any::<u64>(),
    ) {
        let p = SdeProblem64::new(alpha, beta, 1.5, 1.0, hurst(h), Drift64::zero()).unwrap();
        let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.0, n).unwrap(), SeedSpec::new(seed, 1)).unwrap();
        let exact = wisfbm::gfbm_exact(&p, &path).unwrap()[n];
        for kind in [SolverKind::Gbmem, SolverKind::ExpFreeze, SolverKind::Rosenbrock] {
            let x = solve_endpoint(&p, kind, &path).unwrap().x_at_t;
            prop_assert!((x - exact).abs() <= 1e-10 * exact.abs());
        }
    }

    #[test]
    fn gbmem_positive_for_nonnegative_drift(h in 0.05f64..0.95, beta in -3.0f64..3.0, x0 in 0.01f64..5.0, seed in any::<u64>()) {
        let drift = Drift64::new("one_plus_cos", |_, x: f64| 1.0 + x.cos());
        let p = SdeProblem64::new(-0.5, beta, x0, 1.0, hurst(h), drift).unwrap();
        let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.0, 20).unwrap(), SeedSpec::new(seed, 2)).unwrap();
        let xs = wisfbm::solve_path(&p, SolverKind::Gbmem, &path).unwrap().values;
        prop_assert!(xs.iter().all(|&x| x > 0.0));
    }
}
