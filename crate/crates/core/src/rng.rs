//! Seeded sampling primitives.
//!
//! Every stochastic operation in the crate draws from a `ChaCha8Rng` seeded
//! explicitly by the caller; parallel shards derive their streams from the
//! root seed, so results are reproducible regardless of thread count.

use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Root RNG for a seeded operation.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG for shard `stream` of a sharded operation with root `seed`.
pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One standard normal deviate (Box-Muller; consumes two uniforms).
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Standard complex Gaussian vector of length `n`.
pub fn complex_gaussian<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| C64::new(standard_normal(rng), standard_normal(rng)))
        .collect()
}

/// Uniform direction on the unit sphere of `C^n`.
pub fn unit_direction<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let g = complex_gaussian(rng, n);
        let norm = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return g.into_iter().map(|c| c / norm).collect();
        }
    }
}

/// Uniform point in the unit ball of `C^n` under the normalized volume
/// (radius via the inverse CDF `r = u^(1/2n)`).
pub fn uniform_ball_point<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    let r = rng.gen::<f64>().powf(1.0 / (2.0 * n as f64));
    unit_direction(rng, n).into_iter().map(|c| c * r).collect()
}
