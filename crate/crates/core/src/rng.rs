//! Deterministic per-sample random-number streams.
//!
//! Every stochastic routine in this crate draws from a ChaCha stream keyed by
//! `(master seed, sample index)`. Sample `i` therefore sees the same random
//! sequence no matter how the ensemble is batched across threads, which is
//! what makes fixed-seed runs byte-identical for any worker count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for sample `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
