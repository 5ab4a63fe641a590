//! Seeded randomness with counter-derived substreams.
//!
//! All generation in this crate flows from one root seed. Each sample gets
//! its own ChaCha stream addressed by `(domain, index)`, so a dataset is
//! byte-identical whether its samples are generated sequentially or in
//! parallel, and regenerating one sample never disturbs the others.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootSeed(pub u64);

impl RootSeed {
    /// Independent stream for sample `index` within `domain` (a family byte,
    /// a command id, ...). Domains keep streams disjoint across files of one
    /// run; indices keep them disjoint within a file.
    pub fn substream(&self, domain: u64, index: u64) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.0);
        rng.set_stream((domain << 40) ^ index);
        rng
    }
}
