//! Per-trial random streams.
//!
//! A stream is ChaCha12 keyed by the master seed with the trial index as
//! the ChaCha stream id, so every (master_seed, stream_id) pair names a
//! fixed, independent sequence regardless of which worker consumes it.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

pub type Substream = ChaCha12Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec { master_seed, stream_id }
    }
}

pub fn substream(seed: SeedSpec) -> Substream {
    let mut rng = ChaCha12Rng::seed_from_u64(seed.master_seed);
    rng.set_stream(seed.stream_id);
    rng
}
