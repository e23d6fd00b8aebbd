use super::{fbm_covariance, FbmPath, HurstParameter, TimeGrid};
use crate::error::{Error, Result};
use crate::rng::{GaussianStream, SeedSpec};
use crate::scalar::Real;

/// Dense sampler `B = L z` with `L L^T` the covariance of `(B(t_1), ..., B(t_n))`.
#[derive(Debug, Clone)]
pub struct CholeskySampler<T> {
    hurst: HurstParameter<T>,
    grid: TimeGrid<T>,
    /// Row-major packed lower triangle.
    lower: Vec<T>,
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

impl<T: Real> CholeskySampler<T> {
    pub const MAX_STEPS: usize = 4096;

    pub fn new(hurst: HurstParameter<T>, grid: TimeGrid<T>) -> Result<Self> {
        let n = grid.n_steps();
        if n > Self::MAX_STEPS {
            return Err(Error::Cholesky(format!("{n} steps exceeds the dense limit of {}", Self::MAX_STEPS)));
        }
        let mut lower = vec![T::zero(); n * (n + 1) / 2];
        for i in 0..n {
            let ti = grid.time(i + 1);
            for j in 0..=i {
                let mut sum = fbm_covariance(hurst, ti, grid.time(j + 1))?;
                for k in 0..j {
                    sum = sum - lower[packed(i, k)] * lower[packed(j, k)];
                }
                if i == j {
                    if !(sum > T::zero()) {
                        return Err(Error::Cholesky(format!("covariance not positive definite at row {i}")));
                    }
                    lower[packed(i, i)] = sum.sqrt();
                } else {
                    lower[packed(i, j)] = sum / lower[packed(j, j)];
                }
            }
        }
        Ok(Self { hurst, grid, lower })
    }

    pub fn sample(&self, seed: SeedSpec) -> FbmPath<T> {
        self.sample_from(&mut GaussianStream::new(seed))
    }

    /// Consumes `n` normals.
    pub fn sample_from(&self, stream: &mut GaussianStream) -> FbmPath<T> {
        let n = self.grid.n_steps();
        let z: Vec<T> = stream.normals(n);
        let mut values = Vec::with_capacity(n + 1);
        values.push(T::zero());
        for i in 0..n {
            let row = &self.lower[packed(i, 0)..=packed(i, i)];
            values.push(row.iter().zip(&z).map(|(&l, &zj)| l * zj).sum());
        }
        FbmPath::new(self.hurst, self.grid, values).expect("value count matches grid")
    }
}
