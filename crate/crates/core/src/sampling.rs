//! Random points on the unit sphere and in the unit ball.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Fills `out` with a uniformly distributed unit vector (normalized
/// standard Gaussian).
pub fn fill_unit_sphere<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for v in out.iter_mut() {
            let g: f64 = rng.sample(StandardNormal);
            *v = g;
            norm_sq += g * g;
        }
        if norm_sq > 1e-200 {
            let inv = 1.0 / norm_sq.sqrt();
            out.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

/// Fills `out` with a uniformly distributed point of the unit ball:
/// a uniform direction scaled by `U^{1/d}`.
pub fn fill_unit_ball<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    fill_unit_sphere(rng, out);
    let u: f64 = rng.random();
    let radius = u.powf(1.0 / out.len() as f64);
    out.iter_mut().for_each(|v| *v *= radius);
}

/// Fills `out` with independent standard normal coordinates.
pub fn fill_gaussian<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
}

/// A seeded stream of uniform unit vectors in `R^d`.
#[derive(Debug, Clone)]
pub struct SphereSampler {
    dim: usize,
    seed: u64,
    rng: ChaCha8Rng,
}

impl SphereSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim >= 1, "sphere dimension must be positive");
        SphereSampler {
            dim,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_into(&mut self, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim);
        fill_unit_sphere(&mut self.rng, out);
    }
}

impl Iterator for SphereSampler {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let mut v = vec![0.0; self.dim];
        self.next_into(&mut v);
        Some(v)
    }
}
