//! Counter-based random substreams.
//!
//! Every noise field is drawn from its own ChaCha8 stream addressed by
//! `(seed, image, frame, channel)`. Streams never share state, so frames
//! and channels may be synthesized in any order or in parallel and still
//! produce identical bits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Address of one noise field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamKey {
    pub image: u64,
    pub frame: u32,
    pub channel: u32,
}

/// Identifies a frame; the channel is filled in per plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FrameKey {
    pub image: u64,
    pub frame: u32,
}

impl FrameKey {
    pub fn new(image: u64, frame: u32) -> Self {
        FrameKey { image, frame }
    }

    pub fn channel(self, channel: u32) -> StreamKey {
        StreamKey { image: self.image, frame: self.frame, channel }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a, used to turn textual ids (scene names) into stream keys.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Derives a child seed from a parent seed and a label.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    mix64(mix64(seed) ^ label)
}

pub fn substream(seed: u64, key: StreamKey) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, key.image));
    rng.set_stream(((key.frame as u64) << 32) | key.channel as u64);
    rng
}
