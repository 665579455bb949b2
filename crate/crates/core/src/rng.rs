//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha12 (`rand_chacha` 0.3),
//! keyed by a 64-bit seed and addressed by a 64-bit stream id. ChaCha is a
//! counter-based generator, so stream `k` of seed `s` is the same sequence no
//! matter which thread asks for it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type StreamRng = ChaCha12Rng;

/// Name and version of the generator, written next to simulation outputs.
pub const GENERATOR: &str = "chacha12/rand_chacha-0.3/v1";

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a sequence of tags.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(mix64(seed), |acc, &t| mix64(acc ^ mix64(t)))
}

/// Stream `stream` of the generator keyed by `seed`.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for a single seed with the default stream.
pub fn seeded(seed: u64) -> StreamRng {
    stream(seed, 0)
}
