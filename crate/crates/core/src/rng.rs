//! Seedable, splittable random source.
//!
//! All randomness flows through [`Rng`], a ChaCha12 stream generator. A seed
//! selects the key and [`split`] selects an independent stream under the same key,
//! so problem construction and optimizer sampling never share a stream.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Rng = ChaCha12Rng;

/// Stream used by optimizer runs.
pub const RUN_STREAM: u64 = 0;
/// Base stream for problem construction; problem components take consecutive streams.
pub const PROBLEM_STREAM: u64 = 1 << 32;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Independent generator for `(seed, stream)`.
pub fn split(seed: u64, stream: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn standard_normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn standard_normal_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| standard_normal(rng)).collect()
}
