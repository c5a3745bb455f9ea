//! Seeded randomness.
//!
//! All randomness derives from a 64-bit seed through ChaCha8
//! (`ChaCha8Rng::seed_from_u64`). Independent streams for parallel trials are
//! obtained with [`stream`], which selects ChaCha's 64-bit stream number, so
//! trial `i` draws the same numbers regardless of which thread runs it.

use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Q;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Stream `index` of the generator rooted at `seed`.
pub fn stream(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One fair coin flip: `true` selects the right-hand branch.
///
/// Uses the low bit of the next 32-bit output.
pub fn flip(rng: &mut SeededRng) -> bool {
    rng.next_u32() & 1 == 1
}

/// Uniform rational `k/denom` with `k` in `0..=denom`.
pub fn unit_rational(rng: &mut SeededRng, denom: u32) -> Q {
    let k = rng.gen_range(0..=denom);
    Q::new(BigInt::from(k), BigInt::from(denom))
}

/// Uniform rational in `(0, 1]` with the given denominator.
pub fn positive_unit_rational(rng: &mut SeededRng, denom: u32) -> Q {
    let k = rng.gen_range(1..=denom);
    Q::new(BigInt::from(k), BigInt::from(denom))
}
