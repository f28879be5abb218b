//! Deterministic sharded Monte-Carlo means.
//!
//! Samples are split into fixed-size shards. Shard `s` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `s`, so its draws depend only
//! on `(seed, s)`. Shards run in parallel on the rayon pool and their
//! running moments are merged in shard order, which makes every estimate a
//! pure function of `(seed, n_samples)` whatever the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::estimate::ScalarEstimate;

/// Samples per shard.
pub const SHARD_SIZE: u64 = 1 << 15;

/// Running mean and sum of squared deviations (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &RunningMoments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / n as f64;
        self.mean += delta * w;
        self.m2 += other.m2 + delta * delta * self.count as f64 * w;
        self.count = n;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    pub fn estimate(&self) -> ScalarEstimate {
        ScalarEstimate::statistical(self.mean(), self.std_error(), self.count)
    }
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Mean and standard error of `sample` over `n` draws.
///
/// `init` builds per-shard scratch state (buffers), `sample` draws one value.
pub fn sharded_mean<S, I, F>(n: u64, seed: u64, init: I, sample: F) -> RunningMoments
where
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut ChaCha8Rng) -> f64 + Sync,
{
    let shards = n.div_ceil(SHARD_SIZE);
    let parts: Vec<RunningMoments> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = shard_rng(seed, s);
            let mut state = init();
            let len = SHARD_SIZE.min(n - s * SHARD_SIZE);
            let mut m = RunningMoments::default();
            for _ in 0..len {
                m.push(sample(&mut state, &mut rng));
            }
            m
        })
        .collect();
    let mut total = RunningMoments::default();
    for p in &parts {
        total.merge(p);
    }
    total
}
