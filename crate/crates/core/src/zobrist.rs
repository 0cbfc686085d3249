//! Zobrist hashing support.
//!
//! Every game derives its feature table from [`ZOBRIST_SEED`] through a
//! SplitMix64 stream, so keys are stable across runs, platforms and game
//! instances with the same configuration.

use core::fmt;
use core::hash::{BuildHasherDefault, Hasher};

/// Fixed seed for all Zobrist feature tables.
pub const ZOBRIST_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit state key. Equal states always produce equal keys; distinct states
/// collide with negligible probability at the state counts this crate deals
/// with (< 2^20 states per table).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ZobristKey(pub u64);

impl fmt::Display for ZobristKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

/// Deterministic stream of 64-bit feature values (SplitMix64).
#[derive(Clone)]
pub struct FeatureStream {
    state: u64,
}

impl FeatureStream {
    /// Stream for one game's feature table. `domain` keeps different games
    /// (and differently configured instances of the same game) from sharing
    /// feature values.
    pub fn new(domain: &str) -> FeatureStream {
        let mut state = ZOBRIST_SEED;
        for b in domain.as_bytes() {
            state = state.wrapping_mul(0x100_0000_01b3).wrapping_add(*b as u64);
        }
        FeatureStream { state }
    }

    pub fn next_value(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn take(&mut self, n: usize) -> alloc::vec::Vec<u64> {
        (0..n).map(|_| self.next_value()).collect()
    }
}

/// Hasher for maps keyed by [`ZobristKey`] or other already-mixed u64 keys.
/// A single multiply is enough because the keys are uniform.
#[derive(Default)]
pub struct KeyHasher {
    hash: u64,
}

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.hash
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.hash = (self.hash ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.hash = v.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (self.hash << 1);
    }

    fn write_u8(&mut self, v: u8) {
        self.write_u64(v as u64);
    }

    fn write_usize(&mut self, v: usize) {
        self.write_u64(v as u64);
    }
}

pub type KeyHashBuilder = BuildHasherDefault<KeyHasher>;

/// Hash map keyed by Zobrist-style keys.
pub type KeyMap<K, V> = hashbrown::HashMap<K, V, KeyHashBuilder>;
