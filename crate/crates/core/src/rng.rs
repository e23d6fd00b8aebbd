//! Reproducible Gaussian streams for parallel Monte Carlo.
//!
//! Every stream is a ChaCha20 keystream keyed by the master seed and selected
//! by the stream index, so sample `m` of an experiment draws the same normals
//! no matter which worker thread evaluates it or in what order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::scalar::Real;

/// Identifies one Gaussian stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { master_seed, stream_index }
    }

    /// Same master seed, different stream.
    pub const fn with_stream(self, stream_index: u64) -> Self {
        Self { master_seed: self.master_seed, stream_index }
    }
}

/// Sequential standard normals drawn from one [`SeedSpec`].
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: ChaCha20Rng,
}

impl GaussianStream {
    pub fn new(seed: SeedSpec) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed.master_seed);
        rng.set_stream(seed.stream_index);
        Self { rng }
    }

    pub fn next_normal<T: Real>(&mut self) -> T {
        let z: f64 = self.rng.sample(StandardNormal);
        T::lit(z)
    }

    pub fn fill<T: Real>(&mut self, out: &mut [T]) {
        for v in out.iter_mut() {
            *v = self.next_normal();
        }
    }

    pub fn normals<T: Real>(&mut self, len: usize) -> Vec<T> {
        (0..len).map(|_| self.next_normal()).collect()
    }
}
