//! Seed derivation and RNG construction.
//!
//! Every stochastic component owns a `ChaCha8Rng` seeded from a `u64`. Child
//! seeds are derived from a parent seed plus a label and integer parts so one
//! global seed fans out to independent, reproducible streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable labeled hash of `(base, label, parts)`.
///
/// Independent of the Rust version and platform, unlike `DefaultHasher`.
pub fn derive_seed(base: u64, label: &str, parts: &[u64]) -> u64 {
    // FNV-1a over the label, then splitmix mixing of each part.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut acc = splitmix64(base ^ h);
    for &p in parts {
        acc = splitmix64(acc ^ splitmix64(p));
    }
    acc
}
