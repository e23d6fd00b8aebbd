//! Fractional Brownian motion on uniform grids.
//!
//! Paths are sampled exactly: the stationary increment sequence (fractional
//! Gaussian noise) is drawn by circulant embedding, and a dense Cholesky
//! sampler of the path covariance serves as oracle and as fallback when the
//! embedding reports a negative eigenvalue.

mod cholesky;
mod circulant;

pub use cholesky::CholeskySampler;
pub use circulant::CirculantSampler;

use crate::error::{Error, Result};
use crate::rng::SeedSpec;
use crate::scalar::{pow_2h, Real};

/// Hurst parameter `H`, restricted to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct HurstParameter<T>(T);

impl<T: Real> HurstParameter<T> {
    pub fn new(h: T) -> Result<Self> {
        if h > T::zero() && h < T::one() {
            Ok(Self(h))
        } else {
            Err(Error::Domain(format!("Hurst parameter must lie in (0, 1), got {h}")))
        }
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }

    /// The exponent `2H` appearing in every covariance formula.
    #[inline]
    pub fn two_h(self) -> T {
        self.0 + self.0
    }
}

/// Uniform grid `t_i = i * T / n`, `i = 0..=n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t_final: T,
    n_steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_final: T, n_steps: usize) -> Result<Self> {
        if !(t_final > T::zero()) || !t_final.is_finite() {
            return Err(Error::Argument(format!("final time must be positive and finite, got {t_final}")));
        }
        if n_steps == 0 {
            return Err(Error::Argument("grid needs at least one step".into()));
        }
        Ok(Self { t_final, n_steps })
    }

    /// Grid with step `dt`; `t_final / dt` must be an integer up to rounding.
    pub fn with_step(t_final: T, dt: T) -> Result<Self> {
        let ratio = t_final / dt;
        let n = ratio.round();
        if !(dt > T::zero()) || n < T::one() || (ratio - n).abs() > T::lit(1e-9) * n {
            return Err(Error::Argument(format!("step {dt} does not divide final time {t_final}")));
        }
        Self::new(t_final, n.to_usize().expect("step count fits usize"))
    }

    #[inline]
    pub fn t_final(&self) -> T {
        self.t_final
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn dt(&self) -> T {
        self.t_final / T::from_count(self.n_steps)
    }

    /// Node `t_i`; the last node is `T` itself rather than `n * dt`.
    #[inline]
    pub fn time(&self, i: usize) -> T {
        debug_assert!(i <= self.n_steps);
        if i == self.n_steps {
            self.t_final
        } else {
            T::from_count(i) * self.dt()
        }
    }

    pub fn times(&self) -> Vec<T> {
        (0..=self.n_steps).map(|i| self.time(i)).collect()
    }

    /// The grid `0 = t_0 < ... < t_k` covering `[0, t_k]`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.n_steps {
            return Err(Error::Argument(format!("cannot truncate a {}-step grid to {k} steps", self.n_steps)));
        }
        Self::new(self.time(k), k)
    }
}

/// A fractional Brownian path stored as values at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FbmPath<T> {
    hurst: HurstParameter<T>,
    grid: TimeGrid<T>,
    values: Vec<T>,
}

impl<T: Real> FbmPath<T> {
    pub fn new(hurst: HurstParameter<T>, grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n_steps() + 1 {
            return Err(Error::Argument(format!(
                "path has {} values, grid needs {}",
                values.len(),
                grid.n_steps() + 1
            )));
        }
        if values[0] != T::zero() {
            return Err(Error::Argument("fBm paths start at zero".into()));
        }
        Ok(Self { hurst, grid, values })
    }

    /// Builds the path by cumulative summation of grid increments.
    pub fn from_increments(hurst: HurstParameter<T>, grid: TimeGrid<T>, increments: &[T]) -> Result<Self> {
        let mut values = Vec::with_capacity(increments.len() + 1);
        let mut acc = T::zero();
        values.push(acc);
        for &dx in increments {
            acc = acc + dx;
            values.push(acc);
        }
        Self::new(hurst, grid, values)
    }

    #[inline]
    pub fn hurst(&self) -> HurstParameter<T> {
        self.hurst
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Prefix of the path on `[0, t_k]`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        let grid = self.grid.truncate(k)?;
        Ok(Self { hurst: self.hurst, grid, values: self.values[..=k].to_vec() })
    }
}

/// `E[B(t) B(s)] = (t^{2H} + s^{2H} - |t - s|^{2H}) / 2`.
pub fn fbm_covariance<T: Real>(h: HurstParameter<T>, t: T, s: T) -> Result<T> {
    if t < T::zero() || s < T::zero() {
        return Err(Error::Domain(format!("covariance needs nonnegative times, got t={t}, s={s}")));
    }
    let two_h = h.two_h();
    Ok(T::lit(0.5) * (pow_2h(t, two_h) + pow_2h(s, two_h) - pow_2h((t - s).abs(), two_h)))
}

/// Autocovariance at lag `k` of increments over steps of length `dt`.
pub fn fgn_autocovariance<T: Real>(h: HurstParameter<T>, lag: usize, dt: T) -> Result<T> {
    if !(dt > T::zero()) {
        return Err(Error::Domain(format!("increment length must be positive, got {dt}")));
    }
    let two_h = h.two_h();
    let k = T::from_count(lag);
    let below = if lag == 0 { T::one() } else { k - T::one() };
    let unit = T::lit(0.5) * (pow_2h(k + T::one(), two_h) - T::lit(2.0) * pow_2h(k, two_h) + pow_2h(below, two_h));
    Ok(dt.powf(two_h) * unit)
}

/// Value at `s` of the path shifted by `-beta` times the covariance kernel
/// anchored at `anchor_t`: `B(s) - beta * cov(anchor_t, s)`.
pub fn translated_fbm<T: Real>(h: HurstParameter<T>, beta: T, anchor_t: T, s: T, b_at_s: T) -> Result<T> {
    Ok(b_at_s - beta * fbm_covariance(h, anchor_t, s)?)
}

/// Keeps every `factor`-th node, coupling a coarse grid to a fine path.
pub fn subsample_path<T: Real>(fine: &FbmPath<T>, factor: usize) -> Result<FbmPath<T>> {
    let n = fine.grid.n_steps();
    if factor == 0 || n % factor != 0 {
        return Err(Error::Argument(format!("subsampling factor {factor} does not divide {n} steps")));
    }
    let grid = TimeGrid::new(fine.grid.t_final(), n / factor)?;
    let values = fine.values.iter().step_by(factor).copied().collect();
    FbmPath::new(fine.hurst, grid, values)
}

/// Exact fBm sample by circulant embedding.
pub fn sample_fbm_path<T: Real>(h: HurstParameter<T>, grid: TimeGrid<T>, seed: SeedSpec) -> Result<FbmPath<T>> {
    Ok(CirculantSampler::new(h, grid)?.sample(seed))
}

/// Exact fBm sample from a dense Cholesky factor (grids up to
/// [`CholeskySampler::MAX_STEPS`] steps).
pub fn sample_fbm_path_cholesky<T: Real>(
    h: HurstParameter<T>,
    grid: TimeGrid<T>,
    seed: SeedSpec,
) -> Result<FbmPath<T>> {
    Ok(CholeskySampler::new(h, grid)?.sample(seed))
}
