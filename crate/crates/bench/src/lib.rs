//! Fixed benchmark instances.

use hypermin_core::sampler::sample_hypergraph;
use hypermin_core::{ModelParams, MultiHypergraph};

pub const SEED: u64 = 0x5eed;

/// A sampled `B(n, m, p)` instance with the shared benchmark seed.
pub fn instance(n: usize, m: u64, p: f64) -> MultiHypergraph {
    let params = ModelParams::new(n, m, p, SEED).expect("valid benchmark parameters");
    sample_hypergraph(&params).expect("benchmark instance fits the sampling budget")
}
