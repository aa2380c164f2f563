//! Seeded random substreams.
//!
//! Every stochastic routine takes its randomness from a [`Substream`], a
//! ChaCha8 generator whose key is derived from the run seed and a suite tag,
//! and whose stream id is the trial index. Trials can therefore run in any
//! order (or concurrently) and still reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier recorded in run manifests.
pub const RNG_ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.9); key = SplitMix64(seed ^ fnv1a64(suite)); stream = trial index";

pub type Substream = ChaCha8Rng;

const fn fnv1a64(tag: &str) -> u64 {
    let bytes = tag.as_bytes();
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    let mut i = 0;
    while i < bytes.len() {
        hash ^= bytes[i] as u64;
        hash = hash.wrapping_mul(0x0100_0000_01b3);
        i += 1;
    }
    hash
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for trial `trial` of suite `suite` under run seed `seed`.
pub fn substream(seed: u64, suite: &str, trial: u64) -> Substream {
    let mut state = seed ^ fnv1a64(suite);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}
