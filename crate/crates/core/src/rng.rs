//! Counter-based random substreams.
//!
//! A `(master_seed, stream_id)` pair selects one of the 2^64 independent
//! ChaCha8 streams keyed by `master_seed`, so every replicate or grid row can
//! own its own generator regardless of which thread evaluates it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeededStream {
            master_seed,
            stream_id,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// SplitMix64 finalizer. Used to derive per-purpose master seeds so that,
/// for example, the null and the alternative draws of a power study never
/// share a stream even when the user passes one seed.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Master seed for a named purpose derived from a user seed.
pub fn derive_seed(master_seed: u64, purpose: &str) -> u64 {
    let tag = purpose
        .bytes()
        .fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01B3));
    mix64(master_seed ^ mix64(tag))
}
