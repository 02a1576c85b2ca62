//! Reproducible, independent random streams.
//!
//! A stream is a ChaCha8 generator keyed by a 64-bit seed and positioned on
//! one of its 2^64 independent streams. Per-path streams are laid out as
//! `path_id * 4 + substream`, so driving noise, excursion flips and bridge
//! variables of one path never overlap, and coupled constructions can reuse
//! exactly the same flips.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn for_path(seed: u64, path_id: u64, sub: Substream) -> Self {
        Self::new(seed, path_id.wrapping_mul(4).wrapping_add(sub as u64))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substream {
    Driving = 0,
    Flips = 1,
    Bridge = 2,
    Misc = 3,
}

/// The three streams a path construction consumes.
#[derive(Debug, Clone)]
pub struct PathStreams {
    pub driving: RngStream,
    pub flips: RngStream,
    pub bridge: RngStream,
}

impl PathStreams {
    pub fn new(seed: u64, path_id: u64) -> Self {
        Self {
            driving: RngStream::for_path(seed, path_id, Substream::Driving),
            flips: RngStream::for_path(seed, path_id, Substream::Flips),
            bridge: RngStream::for_path(seed, path_id, Substream::Bridge),
        }
    }

    pub fn seed(&self) -> u64 {
        self.driving.seed()
    }
}

/// Mixes an experiment tag into a base seed (SplitMix64 finalizer), so that
/// experiments sharing a base seed draw independent noise.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
