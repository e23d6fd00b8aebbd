mod common;

use common::*;
use rayon::prelude::*;
use wisfbm::{sample_fbm_path, CirculantSampler, SeedSpec, TimeGrid64};

/// A correct sampler puts about 0.27% of entries beyond 3 SE, so over
/// thousands of entries a few exceedances are expected: allow up to 1% of
/// them, and none beyond 5 SE.
fn assert_law(cmp: CovarianceComparison) {
    assert!(
        cmp.violations as f64 <= 0.01 * cmp.entries as f64 && cmp.worst_z <= 5.0,
        "{} of {} entries beyond 3 SE, worst z {}",
        cmp.violations,
        cmp.entries,
        cmp.worst_z
    );
}

#[test]
fn single_step_marginal_variance() {
    let samples = 100_000;
    for &(h, t) in &[(0.2, 1.0), (0.5, 2.0), (0.85, 0.5)] {
        let grid = TimeGrid64::new(t, 1).unwrap();
        let sampler = CirculantSampler::new(hurst(h), grid).unwrap();
        let v: Vec<f64> = (0..samples).map(|m| sampler.sample(SeedSpec::new(10, m)).values()[1]).collect();
        let var = v.iter().map(|x| x * x).sum::<f64>() / samples as f64;
        let expected = t.powf(2.0 * h);
        // Var of the second-moment estimator of a centred normal is 2 sigma^4 / M.
        let se = expected * (2.0 / samples as f64).sqrt();
        assert!((var - expected).abs() <= 3.0 * se, "H={h}: {var} vs {expected}");
    }
}

#[test]
fn brownian_case_covariance() {
    let samples = 100_000;
    let grid = TimeGrid64::new(1.0, 256).unwrap();
    let sampler = CirculantSampler::new(hurst(0.5), grid).unwrap();
    let emp = empirical_covariance(256, samples, |m| sampler.sample(SeedSpec::new(11, m)));
    assert_law(compare_to_analytic(0.5, &grid, samples, &emp, 3.0));
}

#[test]
fn rough_case_covariance() {
    let samples = 100_000;
    let grid = TimeGrid64::new(1.0, 64).unwrap();
    let sampler = CirculantSampler::new(hurst(0.25), grid).unwrap();
    let emp = empirical_covariance(64, samples, |m| sampler.sample(SeedSpec::new(12, m)));
    assert_law(compare_to_analytic(0.25, &grid, samples, &emp, 3.0));
}

#[test]
fn brownian_increments_are_white() {
    // M = 1e5 increments from one long path.
    let m = 100_000;
    let path = sample_fbm_path(hurst(0.5), TimeGrid64::new(1.0, m).unwrap(), SeedSpec::new(13, 0)).unwrap();
    let inc: Vec<f64> = path.values().windows(2).map(|w| w[1] - w[0]).collect();
    let mean = inc.iter().sum::<f64>() / m as f64;
    let var = inc.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m as f64;
    for lag in 1..=5 {
        let c = inc.iter().zip(&inc[lag..]).map(|(a, b)| (a - mean) * (b - mean)).sum::<f64>() / m as f64;
        let rho = c / var;
        assert!(rho.abs() <= 3.0 / (m as f64).sqrt(), "lag {lag}: {rho}");
    }
}

#[test]
fn increments_have_fgn_correlation() {
    // Lag-one correlation of fGN is 2^{2H-1} - 1.
    let n = 1 << 16;
    for &h in &[0.2, 0.8] {
        let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.0, n).unwrap(), SeedSpec::new(14, 0)).unwrap();
        let inc: Vec<f64> = path.values().windows(2).map(|w| w[1] - w[0]).collect();
        let var = inc.iter().map(|x| x * x).sum::<f64>();
        let rho = inc.iter().zip(&inc[1..]).map(|(a, b)| a * b).sum::<f64>() / var;
        let expected = 2f64.powf(2.0 * h - 1.0) - 1.0;
        assert!((rho - expected).abs() < 0.02, "H={h}: {rho} vs {expected}");
    }
}

#[test]
fn streams_are_uncorrelated() {
    let grid = TimeGrid64::new(1.0, 4).unwrap();
    let sampler = CirculantSampler::new(hurst(0.7), grid).unwrap();
    let samples = 50_000;
    let prod: f64 = (0..samples as u64)
        .into_par_iter()
        .map(|m| {
            let a = sampler.sample(SeedSpec::new(15, 2 * m)).values()[4];
            let b = sampler.sample(SeedSpec::new(15, 2 * m + 1)).values()[4];
            a * b
        })
        .sum::<f64>()
        / samples as f64;
    assert!(prod.abs() < 4.0 / (samples as f64).sqrt());
}
