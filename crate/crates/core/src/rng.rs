//! Seeded random draws used by the oracle, the simulators, and the trainer.
//!
//! All sampling is a fixed-length transform of uniform draws (no rejection
//! loops with data-dependent consumption), so streams stay aligned across
//! parameter changes and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The single RNG used everywhere; deterministic per seed on every platform.
pub type SeededRng = ChaCha8Rng;

/// A fresh deterministic stream for `seed`.
pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on [lo, hi).
pub fn uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    lo + (hi - lo) * rng.random::<f64>()
}

/// Gaussian draw with mean `mu` and variance `sigma2`, via the cosine
/// Box-Muller branch (exactly two uniforms per draw).
pub fn gaussian(rng: &mut SeededRng, mu: f64, sigma2: f64) -> f64 {
    debug_assert!(sigma2 > 0.0);
    let u1: f64 = 1.0 - rng.random::<f64>(); // (0, 1]: keeps ln finite
    let u2: f64 = rng.random::<f64>();
    let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
    mu + sigma2.sqrt() * z
}

/// Exponential draw with rate `lambda`, via inversion (one uniform per draw).
pub fn exponential(rng: &mut SeededRng, lambda: f64) -> f64 {
    debug_assert!(lambda > 0.0);
    let u: f64 = rng.random::<f64>(); // [0, 1): 1-u stays positive
    -(1.0 - u).ln() / lambda
}
