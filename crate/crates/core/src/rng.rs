//! Portable seedable PRNG used by the simulation.
//!
//! The generator is xoshiro256** seeded through splitmix64, both taken from
//! `rand_xoshiro`. The algorithms are written out in `docs/rng.md` so a replay
//! can be reproduced by any implementation that follows the same equations.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256StarStar};
use serde::{Deserialize, Serialize};

/// First splitmix64 output for `seed`.
pub fn splitmix64(seed: u64) -> u64 {
    SplitMix64::seed_from_u64(seed).next_u64()
}

/// xoshiro256** generator. The full 256-bit state is serialized with the game
/// so that a restored state continues the exact same stream.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimRng(Xoshiro256StarStar);

impl SimRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform double in `[0, 1)` built from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Value in `[0, bound)` by 128-bit multiply-shift. `bound` must be non-zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Bernoulli draw with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}
