//! Seed derivation and the crate-wide RNG choice.
//!
//! Every randomized operation takes a single `u64` seed and derives
//! per-component streams from it, so results are reproducible across
//! platforms and across runs regardless of thread scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The deterministic RNG used throughout the crate.
pub type Rng = ChaCha8Rng;

/// Build an RNG from a bare seed.
pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derive a child seed for a named component and index tuple.
///
/// Uses splitmix64 over the xor-folded inputs. Child streams for distinct
/// `(label, parts)` tuples are independent for practical purposes.
pub fn derive(seed: u64, label: &str, parts: &[u64]) -> u64 {
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    state = splitmix64(state ^ fnv1a(label.as_bytes()));
    for &p in parts {
        state = splitmix64(state ^ p);
    }
    state
}

/// RNG for a named sub-stream.
pub fn derived_rng(seed: u64, label: &str, parts: &[u64]) -> Rng {
    rng(derive(seed, label, parts))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_stable() {
        assert_eq!(derive(42, "folds", &[1, 2]), derive(42, "folds", &[1, 2]));
    }

    #[test]
    fn derive_separates_labels_and_parts() {
        let a = derive(42, "folds", &[1, 2]);
        assert_ne!(a, derive(42, "smote", &[1, 2]));
        assert_ne!(a, derive(42, "folds", &[2, 1]));
        assert_ne!(a, derive(43, "folds", &[1, 2]));
    }
}
