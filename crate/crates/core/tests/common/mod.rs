#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use wisfbm::{
    convergence_study, dyadic_dt_list, fbm_covariance, sample_fbm_path, solve_endpoint, solve_path, tilde_j,
    tilde_j_inverse_at_anchor, wick_exp_gaussian, CholeskySampler, CirculantSampler, ConvergenceConfig64, Drift64,
    FbmPath64, Hurst64, SdeProblem64, SeedSpec, SolverKind, TimeGrid64,
};

pub type Check = Result<String, String>;

pub fn hurst(h: f64) -> Hurst64 {
    Hurst64::new(h).unwrap()
}

/// `a(x) = 4x/(1+x^2)`, `beta = 1`, `x0 = 1`, `T = 1`.
pub fn rational_problem(alpha: f64, h: f64) -> SdeProblem64 {
    SdeProblem64::new(alpha, 1.0, 1.0, 1.0, hurst(h), Drift64::quasi_rational()).unwrap()
}

/// Desk-scale study: `M = 500` in batches of 50, reference on `2^14` steps,
/// `dt = 2^-6 .. 2^-10`.
pub fn desk_config(problem: SdeProblem64, methods: Vec<SolverKind>) -> ConvergenceConfig64 {
    ConvergenceConfig64 {
        problem,
        methods,
        dt_list: dyadic_dt_list(1.0, 6..=10),
        ref_steps: 1 << 14,
        samples: 500,
        batches: 10,
        master_seed: 2024,
    }
}

/// Second moments `E[B(t_i) B(t_j)]` (mean known to be zero) over `samples`
/// paths, upper triangle packed row-major over nodes `1..=n`.
pub fn empirical_covariance(n: usize, samples: usize, draw: impl Fn(u64) -> FbmPath64 + Sync) -> Vec<f64> {
    let chunk = 1000;
    let partials: Vec<Vec<f64>> = (0..samples.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; n * (n + 1) / 2];
            for m in c * chunk..((c + 1) * chunk).min(samples) {
                let p = draw(m as u64);
                let v = &p.values()[1..];
                let mut idx = 0;
                for i in 0..n {
                    for j in i..n {
                        acc[idx] += v[i] * v[j];
                        idx += 1;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n * (n + 1) / 2];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total.iter().map(|s| s / samples as f64).collect()
}

pub struct CovarianceComparison {
    pub violations: usize,
    pub entries: usize,
    pub worst_z: f64,
}

/// Entrywise z-scores of `empirical` against the analytic covariance, with
/// the Gaussian standard error `sqrt((C_ii C_jj + C_ij^2) / M)`.
pub fn compare_to_analytic(h: f64, grid: &TimeGrid64, samples: usize, empirical: &[f64], tol_se: f64) -> CovarianceComparison {
    let n = grid.n_steps();
    let c = |i: usize, j: usize| fbm_covariance(hurst(h), grid.time(i + 1), grid.time(j + 1)).unwrap();
    let mut out = CovarianceComparison { violations: 0, entries: 0, worst_z: 0.0 };
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            let cij = c(i, j);
            let se = ((c(i, i) * c(j, j) + cij * cij) / samples as f64).sqrt();
            let z = (empirical[idx] - cij).abs() / se;
            out.worst_z = out.worst_z.max(z);
            if z > tol_se {
                out.violations += 1;
            }
            out.entries += 1;
            idx += 1;
        }
    }
    out
}

/// Z-scores of the difference of two independent-estimate covariance matrices.
pub fn compare_estimates(h: f64, grid: &TimeGrid64, samples: usize, a: &[f64], b: &[f64], tol_se: f64) -> CovarianceComparison {
    let n = grid.n_steps();
    let c = |i: usize, j: usize| fbm_covariance(hurst(h), grid.time(i + 1), grid.time(j + 1)).unwrap();
    let mut out = CovarianceComparison { violations: 0, entries: 0, worst_z: 0.0 };
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            let cij = c(i, j);
            let se = (2.0 * (c(i, i) * c(j, j) + cij * cij) / samples as f64).sqrt();
            let z = (a[idx] - b[idx]).abs() / se;
            out.worst_z = out.worst_z.max(z);
            if z > tol_se {
                out.violations += 1;
            }
            out.entries += 1;
            idx += 1;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Property checks shared by the property suite and the acceptance gate. Each
// returns a summary on success and the first violation otherwise.

/// `|t^{2H} - s^{2H}| <= |t-s|^{2H}` for `H <= 1/2`, `<= 2H T^{2H-1} |t-s|` above.
pub fn check_power_difference_bound() -> Check {
    let mut rng = StdRng::seed_from_u64(101);
    let t_final: f64 = 3.0;
    let mut checked = 0;
    for &h in &[0.05, 0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 0.99] {
        let two_h = 2.0 * h;
        for _ in 0..10_000 {
            let a: f64 = rng.random_range(0.0..=t_final);
            let b: f64 = rng.random_range(0.0..=t_final);
            let (s, t) = if a <= b { (a, b) } else { (b, a) };
            let lhs = (t.powf(two_h) - s.powf(two_h)).abs();
            let rhs = if h <= 0.5 { (t - s).powf(two_h) } else { two_h * t_final.powf(two_h - 1.0) * (t - s) };
            if lhs > rhs + 1e-12 {
                return Err(format!("H={h} s={s} t={t}: {lhs} > {rhs}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs"))
}

/// `J~^t(t) * (1/J~^t(t)) = 1` within 1e-12 relative.
pub fn check_reciprocity() -> Check {
    let mut rng = StdRng::seed_from_u64(202);
    for i in 0..10_000 {
        let h = rng.random_range(0.01..0.99);
        let t_final = rng.random_range(0.1..5.0);
        let p = SdeProblem64::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            1.0,
            t_final,
            hurst(h),
            Drift64::zero(),
        )
        .unwrap();
        let t = rng.random_range(0.0..=t_final);
        let b = rng.random_range(-4.0..4.0);
        let j = tilde_j(&p, t, t, b).map_err(|e| e.to_string())?;
        let inv = tilde_j_inverse_at_anchor(&p, t, b).map_err(|e| e.to_string())?;
        if !(j > 0.0 && inv > 0.0) || (j * inv - 1.0).abs() > 1e-12 {
            return Err(format!("case {i}: J={j} inverse={inv}"));
        }
    }
    Ok("10000 random cases".into())
}

/// Mean of the Wick exponential over exact fBm samples is 1 within 3 SE.
pub fn check_wick_unit_mean() -> Check {
    let samples = 100_000;
    let mut lines = Vec::new();
    for &h in &[0.1, 0.5, 0.9] {
        let sampler = CirculantSampler::new(hurst(h), TimeGrid64::new(1.0, 8).unwrap()).unwrap();
        let vals: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|m| {
                let b = sampler.sample(SeedSpec::new(303, m as u64)).values()[8];
                wick_exp_gaussian(1.0, hurst(h), 1.0, b).unwrap()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / samples as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        let se = (var / samples as f64).sqrt();
        if (mean - 1.0).abs() > 3.0 * se {
            return Err(format!("H={h}: mean {mean} is {:.2} SE from 1", (mean - 1.0).abs() / se));
        }
        lines.push(format!("H={h}: {:.2} SE", (mean - 1.0).abs() / se));
    }
    Ok(lines.join(", "))
}

/// GBMEM stays positive at every node when `a >= 0` and `x0 > 0`.
pub fn check_positivity() -> Check {
    let drifts = [Drift64::new("softplus", |_, x: f64| x.exp().ln_1p()), Drift64::new("abs_sin", |_, x: f64| x.sin().abs()), Drift64::zero(), Drift64::log_square()];
    let mut nodes = 0;
    for (d, drift) in drifts.iter().enumerate() {
        for &h in &[0.1, 0.5, 0.9] {
            for m in 0..20u64 {
                let p = SdeProblem64::new(-1.0, 2.0, 0.5, 1.0, hurst(h), drift.clone()).unwrap();
                let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.0, 50).unwrap(), SeedSpec::new(404, m)).unwrap();
                let xs = solve_path(&p, SolverKind::Gbmem, &path).map_err(|e| e.to_string())?.values;
                if let Some(k) = xs.iter().position(|&x| !(x > 0.0)) {
                    return Err(format!("drift {d} H={h} seed {m}: X[{k}] = {}", xs[k]));
                }
                nodes += xs.len();
            }
        }
    }
    Ok(format!("{nodes} nodes positive"))
}

/// With `alpha = 0` GBMEM and MishuraEM are bit-identical.
pub fn check_alpha_zero_coincidence() -> Check {
    for &h in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        for drift in [Drift64::quasi_rational(), Drift64::cosine(), Drift64::log_square()] {
            let p = SdeProblem64::new(0.0, 1.5, 2.0, 1.0, hurst(h), drift).unwrap();
            for m in 0..10u64 {
                let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.0, 40).unwrap(), SeedSpec::new(505, m)).unwrap();
                let a = solve_path(&p, SolverKind::Gbmem, &path).map_err(|e| e.to_string())?;
                let b = solve_path(&p, SolverKind::MishuraEm, &path).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("H={h} drift {} seed {m} differs", p.drift.name()));
                }
            }
        }
    }
    Ok("150 paths bit-identical".into())
}

/// `solve_path(..)[k]` equals `solve_endpoint` on the truncated problem, and
/// exactly so at `k = n`.
pub fn check_path_endpoint_consistency() -> Check {
    let mut cases = 0;
    for kind in SolverKind::ALL {
        for &h in &[0.2, 0.5, 0.8] {
            let p = rational_problem(1.0, h);
            let path = sample_fbm_path(hurst(h), TimeGrid64::new(1.0, 30).unwrap(), SeedSpec::new(606, 0)).unwrap();
            let xs = solve_path(&p, kind, &path).map_err(|e| e.to_string())?.values;
            if xs[0] != p.x0 {
                return Err(format!("{kind}: values[0] = {}", xs[0]));
            }
            let end = solve_endpoint(&p, kind, &path).map_err(|e| e.to_string())?;
            if xs[30] != end.x_at_t {
                return Err(format!("{kind} H={h}: final node {} vs endpoint {}", xs[30], end.x_at_t));
            }
            for k in 1..=30 {
                let sub = path.truncate(k).unwrap();
                let pk = p.with_t_final(sub.grid().t_final()).unwrap();
                let e = solve_endpoint(&pk, kind, &sub).map_err(|e| e.to_string())?.x_at_t;
                if xs[k] != e {
                    return Err(format!("{kind} H={h} node {k}: {} vs {e}", xs[k]));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} truncations"))
}

/// Equal seeds give equal paths; study results do not depend on thread count.
pub fn check_determinism() -> Check {
    let grid = TimeGrid64::new(1.0, 1000).unwrap();
    for m in 0..5u64 {
        let a = sample_fbm_path(hurst(0.3), grid, SeedSpec::new(707, m)).unwrap();
        let b = sample_fbm_path(hurst(0.3), grid, SeedSpec::new(707, m)).unwrap();
        if a.values() != b.values() {
            return Err(format!("path {m} not reproducible"));
        }
    }
    let mut cfg = desk_config(rational_problem(1.0, 0.35), SolverKind::ALL.to_vec());
    cfg.ref_steps = 1 << 10;
    cfg.dt_list = dyadic_dt_list(1.0, 3..=6);
    cfg.samples = 60;
    cfg.batches = 6;
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| convergence_study(&cfg).unwrap().table)
    };
    let one = run(1);
    for threads in [2, 4, 7] {
        if run(threads) != one {
            return Err(format!("{threads} threads differ from 1 thread"));
        }
    }
    Ok("paths and 1/2/4/7-thread studies bit-identical".into())
}

/// Cholesky sampler for the same grid, for covariance comparisons.
pub fn cholesky(h: f64, grid: TimeGrid64) -> CholeskySampler<f64> {
    CholeskySampler::new(hurst(h), grid).unwrap()
}
