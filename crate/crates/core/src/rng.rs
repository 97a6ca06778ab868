//! Seeding rules.
//!
//! Every random stream in the crate is a [`ChaCha8Rng`] seeded through
//! [`ChaCha8Rng::seed_from_u64`], which is portable across platforms.
//! Derived seeds come from a SplitMix64 hash chain:
//!
//! ```text
//! graph seed g        = derive(master, GRAPH_STREAM, g)
//! strategy seed (g,r) = derive(derive(master, STRATEGY_STREAM, g), STRATEGY_STREAM, r)
//! ```
//!
//! Seeds depend only on the master seed and the graph/realisation index,
//! never on which grid cell is being evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub const GRAPH_STREAM: u64 = 0x6772_6170_6873_0001;
pub const STRATEGY_STREAM: u64 = 0x7374_7261_7473_0002;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive(parent: u64, stream: u64, index: u64) -> u64 {
    mix64(mix64(parent ^ stream).wrapping_add(index))
}

pub fn graph_seed(master: u64, graph_index: usize) -> u64 {
    derive(master, GRAPH_STREAM, graph_index as u64)
}

pub fn strategy_seed(master: u64, graph_index: usize, realisation: usize) -> u64 {
    let per_graph = derive(master, STRATEGY_STREAM, graph_index as u64);
    derive(per_graph, STRATEGY_STREAM, realisation as u64)
}
