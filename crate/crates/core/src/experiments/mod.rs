//! Monte Carlo strong-error studies.
//!
//! Sample `m` of every study draws one fine fBm path from stream `m`. The
//! reference `X(T)` is the GBMEM endpoint on that path and each coarse
//! solve reads the same path subsampled, so all `(method, dt)` pairs are
//! pathwise coupled. Per-sample errors are reduced in sample order, making
//! results independent of the rayon pool size.

mod fit;

pub use fit::{estimate_error_constant, fit_rate, RateFit};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fbm::{subsample_path, CirculantSampler, HurstParameter, TimeGrid};
use crate::rng::SeedSpec;
use crate::scalar::Real;
use crate::solvers::{solve_endpoint, SolverKind};
use crate::wis::SdeProblem;

#[derive(Debug, Clone)]
pub struct ConvergenceConfig<T> {
    pub problem: SdeProblem<T>,
    pub methods: Vec<SolverKind>,
    /// Strictly decreasing; each `T / dt` must divide `ref_steps`.
    pub dt_list: Vec<T>,
    pub ref_steps: usize,
    pub samples: usize,
    /// Must divide `samples`.
    pub batches: usize,
    pub master_seed: u64,
}

/// `T / 2^k` for each `k` in `exponents`.
pub fn dyadic_dt_list<T: Real>(t_final: T, exponents: impl IntoIterator<Item = i32>) -> Vec<T> {
    exponents.into_iter().map(|k| t_final * T::lit(2f64.powi(-k))).collect()
}

impl<T: Real> ConvergenceConfig<T> {
    /// Subsampling factor from the reference grid for each entry of `dt_list`.
    pub fn subsample_factors(&self) -> Result<Vec<usize>> {
        let cfg = |msg: String| Err(Error::Configuration(msg));
        if self.methods.is_empty() {
            return cfg("no methods selected".into());
        }
        if self.dt_list.is_empty() {
            return cfg("empty dt list".into());
        }
        if self.samples == 0 || self.batches == 0 || self.samples % self.batches != 0 {
            return cfg(format!("{} batches do not divide {} samples", self.batches, self.samples));
        }
        if self.ref_steps == 0 {
            return cfg("reference grid needs at least one step".into());
        }
        if self.dt_list.windows(2).any(|w| !(w[0] > w[1])) {
            return cfg("dt list must be strictly decreasing".into());
        }
        if self.methods.contains(&SolverKind::Rosenbrock) && !self.problem.drift.has_x_derivative() {
            return cfg(format!("Rosenbrock needs da/dx but drift '{}' has none", self.problem.drift.name()));
        }
        self.dt_list
            .iter()
            .map(|&dt| {
                let grid = TimeGrid::with_step(self.problem.t_final, dt)
                    .map_err(|_| Error::Configuration(format!("dt = {dt} does not divide T = {}", self.problem.t_final)))?;
                let n = grid.n_steps();
                if self.ref_steps % n != 0 {
                    return Err(Error::Configuration(format!(
                        "{n} coarse steps do not divide {} reference steps",
                        self.ref_steps
                    )));
                }
                Ok(self.ref_steps / n)
            })
            .collect()
    }

    pub fn with_hurst(&self, hurst: HurstParameter<T>) -> Self {
        let mut out = self.clone();
        out.problem.hurst = hurst;
        out
    }
}

/// Pooled and per-batch RMSE at one `(method, dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseEntry<T> {
    pub method: SolverKind,
    pub dt: T,
    pub rmse: T,
    pub batch_rmses: Vec<T>,
}

impl<T: Real> RmseEntry<T> {
    /// Sample standard deviation of the batch RMSEs.
    pub fn batch_std(&self) -> T {
        let b = self.batch_rmses.len();
        if b < 2 {
            return T::zero();
        }
        let k = T::from_count(b);
        let mean = self.batch_rmses.iter().copied().sum::<T>() / k;
        (self.batch_rmses.iter().map(|&r| (r - mean) * (r - mean)).sum::<T>() / (k - T::one())).sqrt()
    }
}

/// RMSE for every `(method, dt)`, method-major in config order.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseTable<T> {
    pub entries: Vec<RmseEntry<T>>,
}

impl<T: Real> RmseTable<T> {
    pub fn get(&self, method: SolverKind, dt: T) -> Option<&RmseEntry<T>> {
        self.entries.iter().find(|e| e.method == method && e.dt == dt)
    }

    pub fn column(&self, method: SolverKind) -> Vec<&RmseEntry<T>> {
        self.entries.iter().filter(|e| e.method == method).collect()
    }

    /// Fits the RMSE column of `method` against dt.
    pub fn fit(&self, method: SolverKind) -> Result<RateFit<T>> {
        let col = self.column(method);
        let dts: Vec<T> = col.iter().map(|e| e.dt).collect();
        let rmses: Vec<T> = col.iter().map(|e| e.rmse).collect();
        let batches: Vec<Vec<T>> = col.iter().map(|e| e.batch_rmses.clone()).collect();
        fit_rate(&dts, &rmses, &batches)
    }
}

#[derive(Debug, Clone)]
pub struct MethodFit<T> {
    pub method: SolverKind,
    pub fit: Result<RateFit<T>>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport<T> {
    pub table: RmseTable<T>,
    pub fits: Vec<MethodFit<T>>,
}

impl<T: Real> ConvergenceReport<T> {
    pub fn fit(&self, method: SolverKind) -> Option<&RateFit<T>> {
        self.fits.iter().find(|f| f.method == method).and_then(|f| f.fit.as_ref().ok())
    }
}

/// Squared endpoint errors of sample `m` for every `(method, dt)` pair.
fn sample_squared_errors<T: Real>(
    config: &ConvergenceConfig<T>,
    sampler: &CirculantSampler<T>,
    pairs: &[(SolverKind, usize)],
    m: usize,
) -> Result<Vec<T>> {
    let fine = sampler.sample(SeedSpec::new(config.master_seed, m as u64));
    let reference = solve_endpoint(&config.problem, SolverKind::Gbmem, &fine)?.x_at_t;
    pairs
        .iter()
        .map(|&(method, factor)| {
            let coarse = subsample_path(&fine, factor)?;
            let x = solve_endpoint(&config.problem, method, &coarse)?.x_at_t;
            let e = reference - x;
            Ok(e * e)
        })
        .collect()
}

/// Runs the coupled Monte Carlo loop for the given `(method, dt index)` pairs.
fn run_pairs<T: Real>(config: &ConvergenceConfig<T>, pairs: &[(SolverKind, usize)]) -> Result<Vec<RmseEntry<T>>> {
    let factors = config.subsample_factors()?;
    let grid = TimeGrid::new(config.problem.t_final, config.ref_steps)?;
    let sampler = CirculantSampler::new(config.problem.hurst, grid)?;
    let by_factor: Vec<(SolverKind, usize)> = pairs.iter().map(|&(k, i)| (k, factors[i])).collect();

    let per_sample: Vec<Vec<T>> = (0..config.samples)
        .into_par_iter()
        .map(|m| sample_squared_errors(config, &sampler, &by_factor, m))
        .collect::<Result<_>>()?;

    let batch_len = config.samples / config.batches;
    let batch_count = T::from_count(batch_len);
    let total = T::from_count(config.samples);
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(p, &(method, dt_index))| {
            let mut pooled = T::zero();
            let batch_rmses = per_sample
                .chunks(batch_len)
                .map(|chunk| {
                    let s: T = chunk.iter().map(|errs| errs[p]).fold(T::zero(), |a, b| a + b);
                    pooled = pooled + s;
                    (s / batch_count).sqrt()
                })
                .collect();
            RmseEntry { method, dt: config.dt_list[dt_index], rmse: (pooled / total).sqrt(), batch_rmses }
        })
        .collect())
}

/// Pooled RMSE and per-batch RMSEs of `method` at `dt` against the
/// reference solution.
pub fn estimate_rmse<T: Real>(config: &ConvergenceConfig<T>, method: SolverKind, dt: T) -> Result<(T, Vec<T>)> {
    let index = config
        .dt_list
        .iter()
        .position(|&d| d == dt)
        .ok_or_else(|| Error::Configuration(format!("dt = {dt} is not in the dt list")))?;
    let entry = run_pairs(config, &[(method, index)])?.pop().expect("one pair requested");
    Ok((entry.rmse, entry.batch_rmses))
}

/// RMSE table and rate fit for every configured method.
pub fn convergence_study<T: Real>(config: &ConvergenceConfig<T>) -> Result<ConvergenceReport<T>> {
    let pairs: Vec<(SolverKind, usize)> = config
        .methods
        .iter()
        .flat_map(|&k| (0..config.dt_list.len()).map(move |i| (k, i)))
        .collect();
    let table = RmseTable { entries: run_pairs(config, &pairs)? };
    let fits = config.methods.iter().map(|&method| MethodFit { method, fit: table.fit(method) }).collect();
    Ok(ConvergenceReport { table, fits })
}

#[derive(Debug, Clone)]
pub struct SweepRow<T> {
    pub hurst: T,
    pub method: SolverKind,
    pub fit: Result<RateFit<T>>,
    /// Proven strong rate `min(H, zeta)`.
    pub theoretical_rate: T,
    /// Conjectured rate `min(H + 1/2, 1)`.
    pub conjectured_rate: T,
}

#[derive(Debug, Clone)]
pub struct SweepReport<T> {
    pub rows: Vec<SweepRow<T>>,
}

/// Proven rate `min(H, zeta)`.
pub fn theoretical_rate<T: Real>(h: HurstParameter<T>, holder_exponent: T) -> T {
    h.value().min(holder_exponent)
}

/// Conjectured rate `min(H + 1/2, 1)`.
pub fn conjectured_rate<T: Real>(h: HurstParameter<T>) -> T {
    (h.value() + T::lit(0.5)).min(T::one())
}

/// Repeats the convergence study of `template` for each Hurst parameter.
pub fn rate_vs_h_sweep<T: Real>(h_list: &[HurstParameter<T>], template: &ConvergenceConfig<T>) -> Result<SweepReport<T>> {
    let zeta = template.problem.drift.holder_exponent();
    let mut rows = Vec::with_capacity(h_list.len() * template.methods.len());
    for &h in h_list {
        let report = convergence_study(&template.with_hurst(h))?;
        for mf in report.fits {
            rows.push(SweepRow {
                hurst: h.value(),
                method: mf.method,
                fit: mf.fit,
                theoretical_rate: theoretical_rate(h, zeta),
                conjectured_rate: conjectured_rate(h),
            });
        }
    }
    Ok(SweepReport { rows })
}
