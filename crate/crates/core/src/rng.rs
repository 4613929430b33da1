//! Counter-based randomness and exact discrete sampling.
//!
//! Every random stream is a ChaCha8 keystream addressed by `(seed, stream)`,
//! and individual draws can be addressed by position, so results never
//! depend on the order in which work is scheduled.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The stream used for sample number `index` of a run seeded with `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The `index`-th 64-bit draw of the keystream for `seed` (stream 0).
pub fn counter_draw(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}

/// `true` iff a uniform 64-bit `draw`, read as the dyadic rational
/// `draw / 2^64`, is strictly below `p`.
pub fn draw_below(draw: u64, p: &BigRational) -> bool {
    // draw / 2^64 < num / den  <=>  draw * den < num * 2^64
    let lhs = BigInt::from(draw) * p.denom();
    let rhs = p.numer() << 64u32;
    lhs < rhs
}

/// Uniform index in `0..n` (unbiased; `rand` uses rejection internally).
pub fn uniform_index<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    assert!(n > 0, "uniform choice from an empty range");
    rng.gen_range(0..n)
}

/// Index `i` with probability proportional to the nonnegative integer
/// `weights[i]`.
pub fn weighted_index<R: Rng + ?Sized>(rng: &mut R, weights: &[u64]) -> usize {
    let total: u64 = weights.iter().sum();
    assert!(total > 0, "all weights are zero");
    let mut x = rng.gen_range(0..total);
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return i;
        }
        x -= w;
    }
    unreachable!("draw below total weight")
}

/// Samples index `i` with probability `probs[i]` exactly.
///
/// The uniform variate is generated lazily as a dyadic interval
/// `[U / 2^L, (U + 1) / 2^L)`; whenever the interval straddles a cumulative
/// boundary, 64 further bits are appended, so no outcome is ever biased.
pub fn exact_index<R: RngCore + ?Sized>(rng: &mut R, probs: &[BigRational]) -> usize {
    assert!(!probs.is_empty());
    debug_assert!(probs.iter().all(|p| !p.is_negative()));
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = BigRational::zero();
    for p in probs {
        acc += p;
        cumulative.push(acc.clone());
    }
    debug_assert!(acc.is_one(), "probabilities must sum to one");

    let mut u = BigUint::zero();
    let mut bits = 0u32;
    loop {
        u = (u << 64u32) + BigUint::from(rng.next_u64());
        bits += 64;
        let scale = BigInt::one() << bits;
        let lo = BigRational::new(BigInt::from(u.clone()), scale.clone());
        let hi = BigRational::new(BigInt::from(u.clone()) + 1, scale);
        // first index whose cumulative bound exceeds lo
        let i = cumulative.partition_point(|c| *c <= lo);
        let i = i.min(probs.len() - 1);
        if hi <= cumulative[i] {
            return i;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn counter_draws_are_addressable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let first: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        for (i, &x) in first.iter().enumerate() {
            assert_eq!(counter_draw(7, i as u64), x);
        }
    }

    #[test]
    fn streams_differ() {
        let a = sample_stream(1, 0).next_u64();
        let b = sample_stream(1, 1).next_u64();
        assert_ne!(a, b);
        assert_eq!(a, sample_stream(1, 0).next_u64());
    }

    #[test]
    fn draw_below_is_exact_at_half() {
        let half = ratio(1, 2);
        assert!(draw_below((1u64 << 63) - 1, &half));
        assert!(!draw_below(1u64 << 63, &half));
        assert!(!draw_below(0, &ratio(0, 1)));
        assert!(draw_below(u64::MAX, &ratio(1, 1)));
    }

    #[test]
    fn exact_index_skips_zero_mass() {
        let probs = vec![ratio(0, 1), ratio(1, 3), ratio(0, 1), ratio(2, 3)];
        let mut rng = sample_stream(3, 0);
        for _ in 0..200 {
            let i = exact_index(&mut rng, &probs);
            assert!(i == 1 || i == 3);
        }
    }

    #[test]
    fn exact_index_frequencies() {
        let probs = vec![ratio(1, 3), ratio(2, 3)];
        let mut rng = sample_stream(11, 0);
        let n = 30_000;
        let ones = (0..n).filter(|_| exact_index(&mut rng, &probs) == 1).count();
        let freq = ones as f64 / n as f64;
        assert!((freq - 2.0 / 3.0).abs() < 0.015, "{freq}");
    }
}
