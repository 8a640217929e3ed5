//! Seeded, splittable random streams.
//!
//! Every stochastic phase of a run draws from its own stream, addressed by
//! `(seed, stream_id)`. Child streams are derived by hashing a path of
//! integers (phase tag, iteration, particle index) into a new stream id, so
//! per-particle work gives the same draws whether it runs on one thread or
//! many.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator type consumed by every sampler in the crate.
pub type SmcRng = ChaCha8Rng;

/// Phase tags used when deriving child streams.
pub mod phase {
    pub const INIT: u64 = 1;
    pub const RESAMPLE: u64 = 2;
    pub const MUTATE: u64 = 3;
    pub const MODEL_NOISE: u64 = 4;
    pub const THETA_NOISE: u64 = 5;
    pub const DATA: u64 = 6;
    pub const AUX: u64 = 7;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Derives a child stream from this one and an index path.
    pub fn derive(&self, path: &[u64]) -> Self {
        let mut id = splitmix64(self.stream_id ^ 0xA076_1D64_78BD_642F);
        for &p in path {
            id = splitmix64(id ^ splitmix64(p.wrapping_add(0xE703_7ED1_A0B4_28DB)));
        }
        Self {
            seed: self.seed,
            stream_id: id,
        }
    }

    /// Instantiates the generator at the start of this stream.
    pub fn rng(&self) -> SmcRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}
