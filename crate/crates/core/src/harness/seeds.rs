//! Seed splitting.
//!
//! A run is identified by `(master, seed index, wind index)`. The scenario
//! seed is `child(master, SCENARIO_STREAM, seed_index)` and the wind seed is
//! `child(scenario_seed, WIND_STREAM, wind_index)`, where
//! `child(p, s, i) = mix(p ^ mix(s * GOLDEN ^ i))` and `mix` is the
//! SplitMix64 finalizer. Seeds depend only on their indices, so runs can be
//! evaluated in any order or in parallel.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
pub const SCENARIO_STREAM: u64 = 1;
pub const WIND_STREAM: u64 = 2;

/// SplitMix64 output function applied to `x + GOLDEN`.
pub fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child(parent: u64, stream: u64, index: u64) -> u64 {
    mix(parent ^ mix(stream.wrapping_mul(GOLDEN) ^ index))
}

pub fn scenario_seed(master: u64, seed_index: u64) -> u64 {
    child(master, SCENARIO_STREAM, seed_index)
}

pub fn wind_seed(scenario_seed: u64, wind_index: u64) -> u64 {
    child(scenario_seed, WIND_STREAM, wind_index)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
