//! Deterministic random streams.
//!
//! A root seed is split into child seeds by mixing `(parent, index)` through
//! SplitMix64. Child `k` depends only on the parent seed and `k`, so work
//! items can be evaluated in any order and on any number of threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Generator used for every stochastic step.
pub type StreamRng = ChaCha12Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of child `index` under `parent`.
pub fn derive_seed(parent: u64, index: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ splitmix64(index.wrapping_mul(GOLDEN) ^ 0xD1B5_4A32_D192_ED03))
}

/// Domain tags so that unrelated consumers of one seed never share a stream.
pub mod domain {
    pub const DESIGN: u64 = 0x01;
    pub const REPLICATION: u64 = 0x02;
    pub const RETRY: u64 = 0x03;
    pub const CV_FOLDS: u64 = 0x04;
    pub const RESPONSES: u64 = 0x05;
    pub const BOOTSTRAP: u64 = 0x06;
    pub const REPLICATE: u64 = 0x07;
}

/// Seed of child `index` inside the sub-domain `tag` of `parent`.
pub fn derive_tagged(parent: u64, tag: u64, index: u64) -> u64 {
    derive_seed(derive_seed(parent, tag), index)
}

pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}
