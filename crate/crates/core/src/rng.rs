//! Deterministic per-task random streams.
//!
//! Every Monte Carlo task `i` of a run seeded with `seed` draws from
//! `ChaCha8Rng::seed_from_u64(seed ^ splitmix64(i))`, so results do not depend on
//! how tasks are scheduled across worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

/// SplitMix64 finalizer, used as the task-index hash.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, task: u64) -> u64 {
    seed ^ splitmix64(task)
}

pub fn task_rng(seed: u64, task: u64) -> TaskRng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, task))
}
