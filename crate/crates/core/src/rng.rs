//! Deterministic random streams.
//!
//! All randomness flows from [`SolverRng`], a ChaCha8 stream cipher RNG
//! seeded from a single `u64`. Benchmark trials derive independent seeds
//! from `(master seed, trial index)` with a SplitMix64 finalizer so trials
//! are reproducible and order-independent.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// The RNG used by every stochastic component (instance generation,
/// initial states, SA proposals, CIM noise).
pub type SolverRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SolverRng {
    SolverRng::seed_from_u64(seed)
}

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Bijective on `u64`.
pub fn split_mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial` of a run with `master` seed:
/// `split_mix64(master + split_mix64(trial + 1))`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    split_mix64(master.wrapping_add(split_mix64(trial.wrapping_add(1))))
}

/// Independent sub-stream of a master seed, used to keep auxiliary runs
/// (e.g. preliminary target calibration) out of the main trial streams.
pub fn stream_seed(master: u64, tag: u64) -> u64 {
    split_mix64(master ^ split_mix64(tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_are_stable() {
        // Frozen values: the mixing function is part of the reproducibility
        // contract and must not change silently.
        assert_eq!(split_mix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(trial_seed(42, 0), trial_seed(42, 0));
        assert_ne!(trial_seed(42, 0), trial_seed(42, 1));
        assert_ne!(trial_seed(42, 0), trial_seed(43, 0));
        assert_ne!(stream_seed(42, 1), trial_seed(42, 1));
    }

    #[test]
    fn rng_reproducible() {
        use rand_chacha::rand_core::RngCore;
        let mut a = rng_from_seed(7);
        let mut b = rng_from_seed(7);
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
