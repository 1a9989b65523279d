//! Counter-based RNG substream derivation.
//!
//! Every Monte Carlo work unit (a replication inside a cell) draws from a
//! ChaCha8 stream keyed by the user seed plus a list of integer tags that
//! identify the unit. Results are therefore independent of scheduling and of
//! the number of worker threads.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent ChaCha8 stream from `(seed, tags...)`.
///
/// Equal inputs give bit-identical streams; any change to the seed or to a
/// tag yields an unrelated stream.
pub fn substream(seed: u64, tags: &[u64]) -> ChaCha8Rng {
    let mut state = seed;
    let mut acc = splitmix64(&mut state);
    for &tag in tags {
        state ^= tag.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        acc ^= splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    let mut s = acc;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Stable tag for a floating-point parameter (distinct values, distinct tags).
pub fn tag_f64(x: f64) -> u64 {
    // Normalize -0.0 to 0.0 so the two encode identically.
    (x + 0.0).to_bits()
}
