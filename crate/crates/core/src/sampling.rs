//! Deterministic sphere sampling.
//!
//! Samples are drawn in fixed-size chunks; chunk `k` uses its own ChaCha stream
//! derived from `(seed, k)`, so a run is reproducible regardless of how the
//! chunks are scheduled across threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::graph_model::{Point3, UnitVector};

pub const CHUNK_SIZE: u64 = 4096;

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Uniform direction via a normalized 3-D Gaussian.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> UnitVector {
    loop {
        let p = Point3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if p.norm() > 1e-6 {
            return UnitVector::normalize(p).expect("norm checked");
        }
    }
}

/// Evaluates `f(rng, count)` for each chunk of `samples` and returns the per-chunk results in order.
pub fn map_chunks<T, F>(samples: u64, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK_SIZE);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let count = CHUNK_SIZE.min(samples - k * CHUNK_SIZE);
            let mut rng = chunk_rng(seed, k);
            f(&mut rng, count)
        })
        .collect()
}

/// `n` points of the spherical Fibonacci lattice.
pub fn fibonacci_lattice(n: usize) -> Vec<UnitVector> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            UnitVector::normalize(Point3::new(r * phi.cos(), r * phi.sin(), z))
                .expect("lattice points are nonzero")
        })
        .collect()
}

/// SplitMix64 finalizer, used to derive independent seeds.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed
        .wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
