//! Seeded, stream-splittable random sources.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// A (seed, stream) pair. ChaCha streams with one key are disjoint, so
/// distinct streams give independent sequences and the same pair always
/// reproduces the same draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Stream for trial `trial` of the experiment cell identified by `key`
    /// (typically the sample size N).
    pub fn for_trial(seed: u64, key: u64, trial: u64) -> Self {
        Self::new(seed, (key << 32) ^ trial)
    }

    pub fn rng(&self) -> SimRng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }
}
