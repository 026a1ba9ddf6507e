//! Seeded, splittable randomness for reproducible campaigns.
//!
//! Every draw comes from a ChaCha8 stream seeded through `seed_from_u64`.
//! Stream `i` of a campaign seeded with `s` is keyed by `stream_seed(s, i)`,
//! a SplitMix64 mix, so a trial's instance never depends on which thread or
//! in which order it was generated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pinned in every report; bump whenever any generator's output changes.
pub const GENERATOR_VERSION: &str = "chacha8+splitmix64/v1";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
