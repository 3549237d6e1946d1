//! Deterministic sub-seed derivation.
//!
//! Every random quantity in a run is drawn from its own generator whose seed
//! is a pure function of the master seed, a stream tag and an index. Results
//! therefore do not depend on evaluation order or on the thread pool.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent random streams within one setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Setup = 1,
    Geometry = 2,
    Shadowing = 3,
    Channel = 4,
    Statistics = 5,
}

/// The SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive(seed: u64, stream: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream as u64)).wrapping_add(index))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    rng(derive(seed, stream, index))
}
