//! Keyed seed derivation.
//!
//! Every stochastic stage of a trial draws from its own generator, seeded by
//! hashing `(trial_seed, stage tag, index)`. Streams are keyed rather than
//! split off a shared sequence, so the order in which trials or bundles are
//! processed never changes what they draw.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive 64-bit mix of two words.
pub fn hash64(a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(a) ^ b.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Stage tags for the per-trial substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stage {
    Graph = 1,
    Permutation = 2,
    Matching = 3,
    Qualities = 4,
    Noise = 5,
    Borda = 6,
    Rsd = 7,
    Mc4 = 8,
}

pub fn stream(seed: u64, stage: Stage, index: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(hash64(hash64(seed, stage as u64), index))
}
