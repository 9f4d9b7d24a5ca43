//! Seeded generator shared by data generation, weight initialization and
//! minibatch shuffling.
//!
//! The stream is fully specified so other implementations can reproduce it
//! bit for bit:
//!
//! * state: four successive SplitMix64 outputs starting from `seed`
//!   (SplitMix64 increment `0x9E3779B97F4A7C15`, mixers `0xBF58476D1CE4E5B9`
//!   and `0x94D049BB133111EB`);
//! * generator: xoshiro256** (`rotl(s1 * 5, 7) * 9`);
//! * `next_f64`: `(next_u64 >> 11) * 2^-53`, uniform on `[0, 1)`;
//! * `below(n)`: the high 64 bits of `next_u64 * n` (128-bit product);
//! * `shuffle`: Fisher-Yates from the last index down, swapping `i` with
//!   `below(i + 1)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

#[derive(Clone, Debug)]
pub struct SeededRng {
    inner: Xoshiro256StarStar,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        // seed_from_u64 expands the seed through SplitMix64
        SeededRng {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Index in `0..n`. `n` must be non-zero.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Derives an independent seed for a named sub-stream of one experiment.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream)
}
