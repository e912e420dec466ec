//! Exact sampling of the maximum-entropy random multi-hypergraph `B(n, m, p)`:
//! `m` independent edges over `[n]`, each vertex present independently with
//! probability `p`.
//!
//! # Generator (version 1)
//!
//! Trial `j` of a hypergraph with seed `s` draws from a ChaCha8 stream keyed by
//! `ChaCha8Rng::seed_from_u64(s)` with stream id `j`, starting at word 0.
//! Vertex `v = 1..=n` is included iff the `v`-th `u64` drawn from that stream
//! is below `p * 2^64` (compared exactly in 128-bit arithmetic). Any change to
//! this scheme must bump [`GENERATOR_VERSION`], since recorded experiment seeds
//! would otherwise silently change meaning.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::edge::{word_count, EdgeSet, MAX_UNIVERSE};
use crate::error::{Error, Result};
use crate::hypergraph::MultiHypergraph;

pub const GENERATOR_VERSION: u32 = 1;

/// Memory budget for one sampled hypergraph.
pub const SAMPLE_BUDGET_BYTES: usize = 1 << 30;

/// Parameters of one draw of `B(n, m, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub n: usize,
    pub m: u64,
    pub p: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn new(n: usize, m: u64, p: f64, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::Usage(format!("n must lie in [1, {MAX_UNIVERSE}], got {n}")));
        }
        if m == 0 {
            return Err(Error::Usage("m must be at least 1".into()));
        }
        check_probability("ModelParams", p)?;
        Ok(ModelParams { n, m, p, seed })
    }

    /// Largest `m` that fits the sampling budget for universe size `n`.
    pub fn max_edges(n: usize) -> u64 {
        (SAMPLE_BUDGET_BYTES / bytes_per_edge(n)) as u64
    }
}

fn bytes_per_edge(n: usize) -> usize {
    // Inline storage covers two words; larger edges spill to the heap.
    let words = word_count(n);
    std::mem::size_of::<EdgeSet>() + if words > 2 { 8 * words } else { 0 }
}

pub(crate) fn check_probability(op: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(op, format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Inclusion threshold `p * 2^64`; a uniform `u64` below it is a success.
#[derive(Clone, Copy, Debug)]
struct BernoulliThreshold(u128);

impl BernoulliThreshold {
    fn new(p: f64) -> Self {
        // Scaling by a power of two is exact, and the cast truncates toward zero.
        BernoulliThreshold((p * 18_446_744_073_709_551_616.0) as u128)
    }

    #[inline]
    fn hit(self, draw: u64) -> bool {
        (draw as u128) < self.0
    }
}

/// Draws one edge over `[n]`, consuming exactly `n` words from `rng`.
///
/// # Panics
///
/// If `n` is not a valid universe size or `p` is outside `[0, 1]`.
pub fn sample_edge<R: RngCore + ?Sized>(n: usize, p: f64, rng: &mut R) -> EdgeSet {
    assert!((1..=MAX_UNIVERSE).contains(&n), "universe size {n} out of range");
    assert!((0.0..=1.0).contains(&p), "probability {p} out of range");
    draw_edge(n, BernoulliThreshold::new(p), rng)
}

fn draw_edge<R: RngCore + ?Sized>(n: usize, threshold: BernoulliThreshold, rng: &mut R) -> EdgeSet {
    let mut e = EdgeSet::empty_unchecked(n);
    for bit in 0..n {
        if threshold.hit(rng.next_u64()) {
            e.insert_unchecked(bit);
        }
    }
    e
}

/// The random stream of trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng.set_word_pos(0);
    rng
}

/// Edge `trial` of the hypergraph drawn with `params`; a pure function of
/// `(params.n, params.p, params.seed, trial)`.
pub fn sample_trial(params: &ModelParams, trial: u64) -> EdgeSet {
    draw_edge(params.n, BernoulliThreshold::new(params.p), &mut trial_rng(params.seed, trial))
}

/// Draws `B(n, m, p)`. Trials are generated in parallel; the result does not
/// depend on the thread count.
pub fn sample_hypergraph(params: &ModelParams) -> Result<MultiHypergraph> {
    let cap = ModelParams::max_edges(params.n);
    if params.m > cap {
        return Err(Error::Resource(format!(
            "m = {} edges over n = {} exceeds the sampling budget of {} MiB (at most {cap} edges)",
            params.m,
            params.n,
            SAMPLE_BUDGET_BYTES >> 20
        )));
    }
    let threshold = BernoulliThreshold::new(params.p);
    let mut base = ChaCha8Rng::seed_from_u64(params.seed);
    base.set_word_pos(0);
    let edges: Vec<EdgeSet> = (0..params.m as usize)
        .into_par_iter()
        .with_min_len(256)
        .map(|j| {
            let mut rng = base.clone();
            rng.set_stream(j as u64);
            rng.set_word_pos(0);
            draw_edge(params.n, threshold, &mut rng)
        })
        .collect();
    Ok(MultiHypergraph::from_parts_unchecked(params.n, edges))
}

/// Mixes a base seed with a path of indices (e.g. grid point, replicate) into
/// an independent 64-bit seed, using the SplitMix64 finalizer at each step.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    path.iter().fold(mix(seed.wrapping_add(0x9e37_79b9_7f4a_7c15)), |acc, &i| {
        mix(acc.rotate_left(23).wrapping_add(mix(i ^ 0xd1b5_4a32_d192_ed03)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_probabilities() {
        let mut rng = trial_rng(7, 0);
        for _ in 0..100 {
            assert!(sample_edge(10, 0.0, &mut rng).is_empty());
            assert_eq!(sample_edge(10, 1.0, &mut rng).cardinality(), 10);
        }
        let g = sample_hypergraph(&ModelParams::new(3, 5, 0.0, 99).unwrap()).unwrap();
        assert_eq!(g.len(), 5);
        assert!(g.edges().iter().all(EdgeSet::is_empty));
    }

    #[test]
    fn consumes_exactly_n_words() {
        let mut a = trial_rng(3, 4);
        let _ = sample_edge(17, 0.4, &mut a);
        let mut b = trial_rng(3, 4);
        for _ in 0..17 {
            b.next_u64();
        }
        assert_eq!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn threshold_extremes() {
        assert!(!BernoulliThreshold::new(0.0).hit(0));
        assert!(BernoulliThreshold::new(1.0).hit(u64::MAX));
        assert!(BernoulliThreshold::new(0.5).hit((1 << 63) - 1));
        assert!(!BernoulliThreshold::new(0.5).hit(1 << 63));
        let tiny = BernoulliThreshold::new(2f64.powi(-64));
        assert!(tiny.hit(0) && !tiny.hit(1));
    }

    #[test]
    fn deterministic_and_order_independent() {
        let params = ModelParams::new(40, 1000, 0.3, 12345).unwrap();
        let a = sample_hypergraph(&params).unwrap();
        let b = sample_hypergraph(&params).unwrap();
        assert_eq!(a, b);
        for j in [0u64, 17, 999] {
            assert_eq!(a.edges()[j as usize], sample_trial(&params, j));
        }
        let other = sample_hypergraph(&ModelParams { seed: 12346, ..params }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0, 1, 0.5, 0).is_err());
        assert!(ModelParams::new(3, 0, 0.5, 0).is_err());
        assert!(ModelParams::new(3, 1, 1.5, 0).is_err());
        assert!(ModelParams::new(3, 1, f64::NAN, 0).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let n = 4096;
        let params = ModelParams::new(n, ModelParams::max_edges(n) + 1, 0.5, 0).unwrap();
        assert!(matches!(sample_hypergraph(&params), Err(Error::Resource(_))));
    }

    #[test]
    fn derived_seeds_differ() {
        let s = derive_seed(1, &[0, 0]);
        assert_ne!(s, derive_seed(1, &[0, 1]));
        assert_ne!(s, derive_seed(1, &[1, 0]));
        assert_ne!(s, derive_seed(2, &[0, 0]));
        assert_eq!(s, derive_seed(1, &[0, 0]));
        let mut seen: std::collections::HashSet<u64> = (0..64).map(|i| derive_seed(i, &[i])).collect();
        assert_eq!(seen.len(), 64);
        seen.extend((0..64).map(|i| derive_seed(i, &[])));
        assert_eq!(seen.len(), 128);
    }
}
