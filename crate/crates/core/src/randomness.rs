//! Seed splitting and the shared uniforms `U_{p,i}`.
//!
//! Both are counter-based: a value depends only on its key, never on how
//! many other values were drawn before it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const SPLIT_DOMAIN: &[u8; 24] = b"repbandit/seed-split/v1\0";
const UNIFORM_DOMAIN: &[u8; 24] = b"repbandit/shared-u/v1\0\0\0";
const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

fn keyed(seed: u64, domain: &[u8; 24]) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..].copy_from_slice(domain);
    ChaCha8Rng::from_seed(key)
}

/// Child seed number `index` of `parent`.
pub fn split_seed(parent: u64, index: u64) -> u64 {
    let mut rng = keyed(parent, SPLIT_DOMAIN);
    rng.set_stream(index);
    rng.next_u64()
}

/// Internal randomness shared by the two runs of a replicability pair.
///
/// `value(p, i)` is `U_{p,i}`: phase `p >= 1`, slot `i`, where slot 0 drives
/// the "keep only the best arm" test and slot `i >= 1` the test of arm
/// `i - 1` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SharedRandomness {
    master_seed: u64,
}

impl SharedRandomness {
    pub fn new(master_seed: u64) -> Self {
        SharedRandomness { master_seed }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Uniform in `[0, 1)`.
    pub fn value(&self, phase: usize, slot: usize) -> f64 {
        let mut rng = keyed(self.master_seed, UNIFORM_DOMAIN);
        rng.set_stream(phase as u64);
        rng.set_word_pos(2 * slot as u128);
        (rng.next_u64() >> 11) as f64 * TWO_POW_M53
    }
}
