//! Seed derivation. Every stream is a SplitMix64 mix of its parent seed and
//! an index, and every random draw uses ChaCha8 seeded from such a value, so
//! results are identical across platforms and builds.

use crate::tasks::{Level, TaskKind};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const OPTION_SALT: u64 = 0x6f70_7469_6f6e_7321;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed `index` of `parent`.
pub fn derive(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index))
}

/// Seed of one round: suite, then kind, then level, then round index.
pub fn round_seed(suite: u64, kind: TaskKind, level: Level, round: u64) -> u64 {
    let k = derive(suite, kind.index() as u64);
    let l = derive(k, level.number() as u64);
    derive(l, round)
}

/// Permutation seed for the option list shown at `turn` of an episode.
pub fn option_seed(instance_seed: u64, turn: u32) -> u64 {
    derive(instance_seed ^ OPTION_SALT, turn as u64)
}
