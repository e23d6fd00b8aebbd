use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{fgn_autocovariance, FbmPath, HurstParameter, TimeGrid};
use crate::error::{Error, Result};
use crate::rng::{GaussianStream, SeedSpec};
use crate::scalar::Real;

/// Davies-Harte sampler: the `n`-lag fGN autocovariance is embedded in a
/// circulant of size `2n` whose spectrum is computed once per (H, grid).
pub struct CirculantSampler<T: Real> {
    hurst: HurstParameter<T>,
    grid: TimeGrid<T>,
    /// `sqrt(lambda_k / 2n)` for each circulant eigenvalue.
    scale: Vec<T>,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for CirculantSampler<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CirculantSampler")
            .field("hurst", &self.hurst)
            .field("grid", &self.grid)
            .field("embedding_size", &self.scale.len())
            .finish()
    }
}

impl<T: Real> CirculantSampler<T> {
    /// Relative tolerance below zero for eigenvalues treated as rounding noise.
    pub const EIGENVALUE_TOLERANCE: f64 = 1e-10;

    pub fn new(hurst: HurstParameter<T>, grid: TimeGrid<T>) -> Result<Self> {
        let eigenvalues = Self::eigenvalues(hurst, grid)?;
        let size = eigenvalues.len();
        let scale = spectral_scale(&eigenvalues)?;
        let fft = FftPlanner::new().plan_fft_forward(size);
        Ok(Self { hurst, grid, scale, fft })
    }

    /// Spectrum of the circulant with first row
    /// `[g_0, g_1, ..., g_{n-1}, g_n, g_{n-1}, ..., g_1]`.
    pub fn eigenvalues(hurst: HurstParameter<T>, grid: TimeGrid<T>) -> Result<Vec<T>> {
        let n = grid.n_steps();
        let size = 2 * n;
        let dt = grid.dt();
        let mut row = vec![Complex::new(T::zero(), T::zero()); size];
        for k in 0..=n {
            let g = fgn_autocovariance(hurst, k, dt)?;
            row[k].re = g;
            if k > 0 && k < n {
                row[size - k].re = g;
            }
        }
        FftPlanner::new().plan_fft_forward(size).process(&mut row);
        Ok(row.into_iter().map(|c| c.re).collect())
    }

    pub fn hurst(&self) -> HurstParameter<T> {
        self.hurst
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn sample(&self, seed: SeedSpec) -> FbmPath<T> {
        self.sample_from(&mut GaussianStream::new(seed))
    }

    /// Consumes `4n` normals: real and imaginary part for each of the `2n`
    /// spectral coefficients, in coefficient order.
    pub fn sample_from(&self, stream: &mut GaussianStream) -> FbmPath<T> {
        let mut buf: Vec<Complex<T>> = self
            .scale
            .iter()
            .map(|&s| {
                let re: T = stream.next_normal();
                let im: T = stream.next_normal();
                Complex::new(s * re, s * im)
            })
            .collect();
        self.fft.process(&mut buf);
        let n = self.grid.n_steps();
        let increments: Vec<T> = buf[..n].iter().map(|c| c.re).collect();
        FbmPath::from_increments(self.hurst, self.grid, &increments).expect("increment count matches grid")
    }
}

/// `sqrt(max(lambda, 0) / len)`, rejecting eigenvalues below the tolerance.
fn spectral_scale<T: Real>(eigenvalues: &[T]) -> Result<Vec<T>> {
    let max = eigenvalues.iter().copied().fold(T::zero(), T::max);
    let tolerance = T::lit(CirculantSampler::<T>::EIGENVALUE_TOLERANCE) * max;
    let inv_size = T::one() / T::from_count(eigenvalues.len());
    eigenvalues
        .iter()
        .enumerate()
        .map(|(index, &lambda)| {
            if lambda < -tolerance {
                Err(Error::EmbeddingFailure { index, eigenvalue: lambda.as_f64(), tolerance: tolerance.as_f64() })
            } else {
                Ok((lambda.max(T::zero()) * inv_size).sqrt())
            }
        })
        .collect()
}
