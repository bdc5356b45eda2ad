//! Seeded randomness, split into independent named streams.
//!
//! One master seed drives the whole run. Each consumer asks for its own
//! stream by label, so adding a new randomized component never perturbs the
//! draw sequence any existing component sees. ChaCha8 keeps the streams
//! stable across platforms and releases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The kernel-owned random source for a single run.
#[derive(Debug, Clone, Copy)]
pub struct SimRng {
    seed: u64,
}

impl SimRng {
    pub fn new(seed: u64) -> Self {
        SimRng { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent generator for `label`. The same
    /// (seed, label) pair always yields the same draw sequence.
    pub fn stream(&self, label: &str) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = self.seed ^ fnv1a(label.as_bytes());
        for chunk in key.chunks_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
