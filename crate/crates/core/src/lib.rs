//! Quasilinear stochastic differential equations driven by fractional
//! Brownian motion,
//!
//! ```text
//! dX(t) = (alpha X(t) + a(t, X(t))) dt + beta X(t) dB^H(t),   X(0) = x0,
//! ```
//!
//! with the stochastic integral in the Wick-Itô-Skorohod sense, for any
//! `H` in (0, 1).
//!
//! * [`fbm`]: exact fBm sampling (circulant embedding, dense Cholesky oracle).
//! * [`wis`]: closed-form geometric fBm and the translated integrating factor.
//! * [`solvers`]: the GBMEM, MishuraEM, ExpFreeze and Rosenbrock schemes.
//! * [`experiments`]: coupled Monte Carlo RMSE studies and rate fits.
//!
//! Everything is generic over the [`Real`] scalar; the `*64` / `*32` aliases
//! below fix it.

pub mod drift;
pub mod error;
pub mod experiments;
pub mod fbm;
pub mod rng;
pub mod scalar;
pub mod solvers;
pub mod wis;

pub use drift::{DriftFunction, BUILTIN_DRIFTS};
pub use error::{Error, Result};
pub use experiments::{
    conjectured_rate, convergence_study, dyadic_dt_list, estimate_error_constant, estimate_rmse, fit_rate,
    rate_vs_h_sweep, theoretical_rate, ConvergenceConfig,
    ConvergenceReport, RateFit, RmseEntry, RmseTable, SweepReport, SweepRow,
};
pub use fbm::{
    fbm_covariance, fgn_autocovariance, sample_fbm_path, sample_fbm_path_cholesky, subsample_path, translated_fbm,
    CholeskySampler, CirculantSampler, FbmPath, HurstParameter, TimeGrid,
};
pub use rng::{GaussianStream, SeedSpec};
pub use scalar::Real;
pub use solvers::{
    solve_endpoint, solve_path, step_expfreeze, step_gbmem, step_rosenbrock, EndpointResult, PathResult, SolverKind,
};
pub use wis::{gfbm_exact, tilde_j, tilde_j_inverse_at_anchor, wick_exp_gaussian, SdeProblem};

pub type Hurst64 = HurstParameter<f64>;
pub type TimeGrid64 = TimeGrid<f64>;
pub type FbmPath64 = FbmPath<f64>;
pub type Drift64 = DriftFunction<f64>;
pub type SdeProblem64 = SdeProblem<f64>;
pub type ConvergenceConfig64 = ConvergenceConfig<f64>;
pub type RateFit64 = RateFit<f64>;
pub type RmseTable64 = RmseTable<f64>;
pub type SweepReport64 = SweepReport<f64>;

pub type Hurst32 = HurstParameter<f32>;
pub type TimeGrid32 = TimeGrid<f32>;
pub type FbmPath32 = FbmPath<f32>;
pub type Drift32 = DriftFunction<f32>;
pub type SdeProblem32 = SdeProblem<f32>;
pub type ConvergenceConfig32 = ConvergenceConfig<f32>;
pub type RateFit32 = RateFit<f32>;
