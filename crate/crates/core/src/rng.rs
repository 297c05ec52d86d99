//! Seed derivation.
//!
//! Every random quantity in the crate is drawn from a ChaCha8 stream whose key
//! is built from `(seed, domain)` and whose stream id is a per-object index (an
//! edge id, an ordered pair id, a replica index, ...). Streams are therefore
//! independent of the order in which objects are visited, and results do not
//! depend on how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Domain tags keep streams for different purposes apart even when the user
/// seed and index coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    EdgeSigns = 1,
    Events = 2,
    Walk = 3,
    Replica = 4,
    Coupling = 5,
    Canonical = 6,
    Parity = 7,
    Coalescing = 8,
    InitialSpins = 9,
}

/// RNG for the `index`-th object of `domain` under the user seed `seed`.
pub fn stream_rng(seed: u64, domain: Domain, index: u64) -> StreamRng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// SplitMix64 finaliser; used to derive child seeds from `(seed, index)`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
