//! Seed derivation for independent, reproducible random streams.
//!
//! Every unit of parallel work (an attribute, a permutation replicate, a
//! synthetic respondent) draws from its own ChaCha stream whose seed is a
//! pure function of the master seed and the unit's index path, so results do
//! not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of child stream `index` under `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    mix(mix(parent ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

pub fn stream(parent: u64, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(derive_seed(parent, index))
}
