//! Seeded random streams.
//!
//! Every random decision in the crate draws from a [`ChaCha8Rng`] whose seed
//! is derived from the run seed and the identity of the decision (word,
//! query index, k, ...). Streams never depend on evaluation order, so
//! parallel and sequential runs agree bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a; stable across platforms and compiler versions.
pub fn hash_str(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Mix a seed with a sequence of identifiers into a new 64-bit seed.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The stream used to break majority ties for one query.
pub fn query_stream(seed: u64, word: &str, query_index: usize, k: usize) -> Stream {
    stream(derive_seed(
        seed,
        &[hash_str(word), query_index as u64, k as u64],
    ))
}
