//! Task-seeded random streams.
//!
//! Every placement draws from ChaCha8 keyed by the task id, on the stream
//! selected by the run's placement seed. ChaCha8 output is specified
//! independently of platform and word size, so decision logs reproduce
//! bit-for-bit across machines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::TaskId;

/// Offset between the placement stream and the execution-noise stream.
const NOISE_STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn placement_rng(task_id: TaskId, placement_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(task_id);
    rng.set_stream(placement_seed);
    rng
}

pub fn noise_rng(task_id: TaskId, placement_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(task_id);
    rng.set_stream(placement_seed ^ NOISE_STREAM_SALT);
    rng
}

/// Uniform index in `0..len`. `len` must be positive.
pub fn random_index<R: Rng>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    rng.random_range(0..len)
}
