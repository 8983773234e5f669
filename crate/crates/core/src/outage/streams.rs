//! Counter-based random stream derivation.
//!
//! Every random draw in a Monte Carlo run comes from a short SplitMix64
//! stream whose seed is a hash of `(master_seed, trial, relay, purpose)`.
//! A trial's draws therefore depend only on its coordinates, never on which
//! worker ran it or in what order, and two scenarios run with the same
//! master seed see the same fading on the same relay of the same trial.

use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

/// What a stream is used for. Each purpose gets an independent stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    SourceHop = 0,
    RelayHop = 1,
    Placement = 2,
}

/// Trial index used for draws shared by a whole run.
pub const RUN_SCOPE: u64 = u64::MAX;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
pub fn stream_seed(master_seed: u64, trial: u64, relay: u32, purpose: Purpose) -> u64 {
    let k = mix(master_seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let k = mix(k ^ trial);
    mix(k ^ ((u64::from(relay) << 2) | purpose as u64))
}

#[inline]
pub fn stream(master_seed: u64, trial: u64, relay: u32, purpose: Purpose) -> SplitMix64 {
    SplitMix64::seed_from_u64(stream_seed(master_seed, trial, relay, purpose))
}
