//! Seeded random streams and stable seed derivation.
//!
//! Every run owns a private [`Stream`]. Seeds for sub-streams are derived
//! with a fixed 64-bit hash so results never depend on the standard
//! library's hasher or on scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream type used throughout the crate.
pub type Stream = ChaCha8Rng;

/// Creates a stream from a 64-bit seed.
pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable hash of a sequence of labelled parts.
///
/// Each part is length-prefixed so `("ab", "c")` and `("a", "bc")` differ.
pub fn stable_hash(parts: &[&[u8]]) -> u64 {
    let mut h = FNV_OFFSET;
    for part in parts {
        for b in (part.len() as u64).to_le_bytes().iter().chain(part.iter()) {
            h ^= u64::from(*b);
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    mix64(h)
}

/// Seed for one run of an experiment.
pub fn run_seed(master_seed: u64, algorithm: &str, function: &str, run_index: usize) -> u64 {
    stable_hash(&[
        &master_seed.to_le_bytes(),
        algorithm.as_bytes(),
        function.as_bytes(),
        &(run_index as u64).to_le_bytes(),
    ])
}

/// Derives an independent child seed, e.g. for the objective-noise stream.
pub fn child_seed(seed: u64, label: &str) -> u64 {
    stable_hash(&[&seed.to_le_bytes(), label.as_bytes()])
}
