//! Deterministic, hierarchically splittable random streams.
//!
//! Every randomized operation takes an [`RngStream`] rather than a raw RNG so
//! that work items (snapshots, null models, scan cells) can draw from
//! independent streams that do not depend on execution order or thread
//! schedule. The same `(seed, stream path)` always yields the same sequence.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Handle identifying one deterministic random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    /// Root stream for a seed.
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    /// Derive an independent child stream. Children with distinct ids, or
    /// derived along distinct paths, are statistically independent.
    pub fn substream(self, id: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(id.wrapping_add(0xA076_1D64_78BD_642F))),
        }
    }

    /// Materialize the stream as a ChaCha generator.
    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    pub fn seed(self) -> u64 {
        self.seed
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
