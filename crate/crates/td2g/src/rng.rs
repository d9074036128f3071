//! Seeded randomness for test-input generation.
//!
//! The generator is xoshiro256** (Blackman and Vigna) seeded through
//! SplitMix64. Trial `k` of a suite with master seed `s` draws from the
//! stream seeded with `s ^ (k * 0x9E3779B97F4A7C15)`, so trials can run in
//! any order or in parallel and still reproduce.

use num_bigint::BigInt;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::intlinalg::{IntVec, Rat, RatVec};

pub type Rng = Xoshiro256StarStar;

const STREAM_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, index: u64) -> Rng {
    Rng::seed_from_u64(seed ^ index.wrapping_mul(STREAM_MIX))
}

/// Uniform index in `0..len` as `next_u64() % len`.
pub fn below(rng: &mut Rng, len: usize) -> usize {
    assert!(len > 0, "empty range");
    (rng.next_u64() % len as u64) as usize
}

/// Uniform integer in `lo..=hi`.
pub fn int_in(rng: &mut Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

pub fn coin(rng: &mut Rng) -> bool {
    rng.next_u64() & 1 == 1
}

/// A rational with numerator in ±`num` and denominator in `1..=den`.
pub fn rational(rng: &mut Rng, num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(int_in(rng, -num, num)), BigInt::from(int_in(rng, 1, den)))
}

pub fn ratvec(rng: &mut Rng, dim: usize) -> RatVec {
    (0..dim).map(|_| rational(rng, 40, 13)).collect()
}

pub fn intvec(rng: &mut Rng, dim: usize, bound: i64) -> IntVec {
    (0..dim).map(|_| BigInt::from(int_in(rng, -bound, bound))).collect()
}
