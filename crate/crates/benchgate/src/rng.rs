//! Deterministic RNG streams.
//!
//! Every randomized procedure takes a `u64` seed and derives independent
//! per-unit streams with [`stream`], so results do not depend on execution
//! order or worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// SplitMix64 finalizer; decorrelates nearby seed values.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with a stream index into a single seed value.
pub fn mix(master: u64, index: u64) -> u64 {
    splitmix64(master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Independent deterministic stream for unit `index` under `master`.
pub fn stream(master: u64, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(mix(master, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<f64> = stream(7, 3).random_iter().take(8).collect();
        let b: Vec<f64> = stream(7, 3).random_iter().take(8).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ_by_index() {
        let a: f64 = stream(7, 0).random();
        let b: f64 = stream(7, 1).random();
        assert_ne!(a, b);
    }
}
