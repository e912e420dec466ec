//! Inclusion-wise minimization of multi-hypergraphs.
//!
//! `min(H)` keeps every edge of `H` that has no proper subset in `H`, with
//! duplicates collapsed to one copy. Three paths compute it and must agree on
//! every input: a quadratic reference ([`minimize_naive`]), the
//! cardinality-ordered algorithm ([`minimize_sorted`]), and a streaming filter
//! ([`StreamingFilter`]) that maintains the minimization of a growing stream.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::edge::{words_subset, EdgeSet};
use crate::error::{Error, Result};
use crate::hypergraph::MultiHypergraph;

/// A family of distinct, pairwise inclusion-incomparable edges.
///
/// Members are kept in canonical order (cardinality, then bit pattern) so that
/// results of different algorithms compare equal with `==`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antichain {
    universe: usize,
    members: Vec<EdgeSet>,
}

fn canonical_order(a: &EdgeSet, b: &EdgeSet) -> std::cmp::Ordering {
    a.cardinality().cmp(&b.cardinality()).then_with(|| a.cmp(b))
}

impl Antichain {
    pub fn empty(universe: usize) -> Result<Self> {
        EdgeSet::empty(universe)?;
        Ok(Antichain { universe, members: Vec::new() })
    }

    /// Validates that `members` form an antichain over `universe`.
    pub fn try_from_members(universe: usize, members: Vec<EdgeSet>) -> Result<Self> {
        MultiHypergraph::new(universe, members.clone())?;
        if !is_antichain(&members) {
            return Err(Error::Usage("members contain a duplicate or a proper subset pair".into()));
        }
        Ok(Self::from_members_unchecked(universe, members))
    }

    fn from_members_unchecked(universe: usize, mut members: Vec<EdgeSet>) -> Self {
        members.sort_by(canonical_order);
        Antichain { universe, members }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[EdgeSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, e: &EdgeSet) -> bool {
        self.members.binary_search_by(|m| canonical_order(m, e)).is_ok()
    }

    pub fn to_hypergraph(&self) -> MultiHypergraph {
        MultiHypergraph::from_parts_unchecked(self.universe, self.members.clone())
    }
}

/// `true` iff the edges are distinct, share a universe, and no edge is a
/// proper subset of another. Quadratic; meant for verification.
pub fn is_antichain(edges: &[EdgeSet]) -> bool {
    let Some(first) = edges.first() else { return true };
    if edges.iter().any(|e| e.universe_size() != first.universe_size()) {
        return false;
    }
    let mut seen = HashSet::with_capacity(edges.len());
    if !edges.iter().all(|e| seen.insert(e)) {
        return false;
    }
    // Only a smaller edge can be a proper subset of a distinct larger one.
    let mut sorted: Vec<&EdgeSet> = edges.iter().collect();
    sorted.sort_by_key(|e| e.cardinality());
    let heads: Vec<u64> = sorted.iter().map(|e| e.words()[0]).collect();
    let mut larger_from = 0;
    for (i, a) in sorted.iter().enumerate() {
        while larger_from < sorted.len() && sorted[larger_from].cardinality() <= a.cardinality() {
            larger_from += 1;
        }
        let head = heads[i];
        for (ci, chunk) in heads[larger_from..].chunks(SCAN_CHUNK).enumerate() {
            let acc = chunk.iter().fold(u64::MAX, |acc, &b| {
                let x = head & !b;
                acc & (x | x.wrapping_neg())
            });
            if acc >> 63 != 0 {
                continue;
            }
            let base = larger_from + ci * SCAN_CHUNK;
            if (base..base + chunk.len()).any(|j| words_subset(a.words(), sorted[j].words())) {
                return false;
            }
        }
    }
    true
}

fn distinct_edges(h: &MultiHypergraph) -> Vec<&EdgeSet> {
    let mut seen = HashSet::with_capacity(h.len());
    h.edges().iter().filter(|e| seen.insert(*e)).collect()
}

/// Reference minimization: an edge survives iff no other distinct edge of `H`
/// is contained in it.
pub fn minimize_naive(h: &MultiHypergraph) -> Antichain {
    let distinct = distinct_edges(h);
    let members = distinct
        .iter()
        .filter(|e| !distinct.iter().any(|f| f != *e && words_subset(f.words(), e.words())))
        .map(|e| (*e).clone())
        .collect();
    Antichain::from_members_unchecked(h.universe_size(), members)
}

/// Accepted minimal edges of one cardinality, stored flat.
///
/// The first word of every member lives in `heads`; the remaining words, if
/// any, follow in `tails` with a fixed stride.
#[derive(Default)]
struct Level {
    heads: Vec<u64>,
    tails: Vec<u64>,
}

const SCAN_CHUNK: usize = 64;

impl Level {
    fn push(&mut self, words: &[u64]) {
        self.heads.push(words[0]);
        self.tails.extend_from_slice(&words[1..]);
    }

    /// Whether some member is a subset of `cand`.
    fn has_subset_of(&self, cand: &[u64]) -> bool {
        let stride = cand.len() - 1;
        let not_head = !cand[0];
        for (ci, chunk) in self.heads.chunks(SCAN_CHUNK).enumerate() {
            // Top bit of `x | -x` is clear iff x == 0; AND-folding keeps it
            // clear iff some member head fits inside the candidate head.
            let acc = chunk.iter().fold(u64::MAX, |acc, &a| {
                let x = a & not_head;
                acc & (x | x.wrapping_neg())
            });
            if acc >> 63 != 0 {
                continue;
            }
            for (k, &a) in chunk.iter().enumerate() {
                if a & not_head != 0 {
                    continue;
                }
                let idx = ci * SCAN_CHUNK + k;
                if words_subset(&self.tails[idx * stride..(idx + 1) * stride], &cand[1..]) {
                    return true;
                }
            }
        }
        false
    }
}

/// Minimization by increasing cardinality.
///
/// Duplicates are removed by hashing and the distinct edges are bucketed by
/// cardinality. Buckets are processed in ascending order; a candidate is only
/// tested against already accepted minimal edges of strictly smaller
/// cardinality (two distinct edges of equal size are incomparable), scanning
/// those in ascending cardinality and stopping at the first subset found.
/// Runtime is `O(mn·|min(H)| + mn)`.
pub fn minimize_sorted(h: &MultiHypergraph) -> Antichain {
    let n = h.universe_size();
    let mut buckets: Vec<Vec<&EdgeSet>> = vec![Vec::new(); n + 1];
    for e in distinct_edges(h) {
        buckets[e.cardinality()].push(e);
    }
    let mut levels: Vec<Level> = Vec::new();
    let mut members = Vec::new();
    for bucket in buckets.iter().filter(|b| !b.is_empty()) {
        let mut level = Level::default();
        for cand in bucket {
            if !levels.iter().any(|l| l.has_subset_of(cand.words())) {
                level.push(cand.words());
                members.push((*cand).clone());
            }
        }
        if !level.heads.is_empty() {
            levels.push(level);
        }
    }
    Antichain::from_members_unchecked(n, members)
}

/// Maintains `min` of all edges inserted so far.
///
/// Members are bucketed by cardinality: an insert only looks for subsets among
/// members no larger than the new edge, and only evicts from strictly larger
/// buckets.
#[derive(Clone, Debug)]
pub struct StreamingFilter {
    universe: usize,
    levels: Vec<Vec<EdgeSet>>,
    len: usize,
}

impl StreamingFilter {
    pub fn new(universe: usize) -> Result<Self> {
        EdgeSet::empty(universe)?;
        Ok(StreamingFilter { universe, levels: vec![Vec::new(); universe + 1], len: 0 })
    }

    pub fn from_antichain(state: &Antichain) -> Self {
        let mut levels = vec![Vec::new(); state.universe + 1];
        for e in &state.members {
            levels[e.cardinality()].push(e.clone());
        }
        StreamingFilter { universe: state.universe, levels, len: state.len() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts `e`. Returns `false` (state unchanged) if a member is a subset
    /// of `e`; otherwise adds `e`, evicts its proper supersets and returns `true`.
    pub fn insert(&mut self, e: &EdgeSet) -> Result<bool> {
        if e.universe_size() != self.universe {
            return Err(Error::Usage(format!(
                "edge over universe {} inserted into a filter over universe {}",
                e.universe_size(),
                self.universe
            )));
        }
        let c = e.cardinality();
        let dominated = self.levels[..=c].iter().flatten().any(|m| words_subset(m.words(), e.words()));
        if dominated {
            return Ok(false);
        }
        for level in &mut self.levels[c + 1..] {
            let before = level.len();
            level.retain(|m| !words_subset(e.words(), m.words()));
            self.len -= before - level.len();
        }
        self.levels[c].push(e.clone());
        self.len += 1;
        Ok(true)
    }

    /// A copy of the current state.
    pub fn snapshot(&self) -> Antichain {
        Antichain::from_members_unchecked(self.universe, self.levels.iter().flatten().cloned().collect())
    }

    pub fn into_antichain(self) -> Antichain {
        Antichain::from_members_unchecked(self.universe, self.levels.into_iter().flatten().collect())
    }
}

/// `min(state ∪ {e})`.
pub fn streaming_insert(state: Antichain, e: &EdgeSet) -> Result<Antichain> {
    let mut filter = StreamingFilter::from_antichain(&state);
    if filter.insert(e)? {
        Ok(filter.into_antichain())
    } else {
        Ok(state)
    }
}

/// Folds all edges of `h`, in order, through a [`StreamingFilter`].
pub fn minimize_streaming(h: &MultiHypergraph) -> Antichain {
    let mut filter = StreamingFilter::new(h.universe_size()).expect("hypergraph universe is valid");
    for e in h.edges() {
        filter.insert(e).expect("hypergraph edges share the universe");
    }
    filter.into_antichain()
}

/// Selects one of the minimization paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Algorithm {
    Naive,
    #[default]
    Sorted,
    Stream,
}

impl Algorithm {
    pub fn run(self, h: &MultiHypergraph) -> Antichain {
        match self {
            Algorithm::Naive => minimize_naive(h),
            Algorithm::Sorted => minimize_sorted(h),
            Algorithm::Stream => minimize_streaming(h),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Algorithm::Naive),
            "sorted" => Ok(Algorithm::Sorted),
            "stream" => Ok(Algorithm::Stream),
            other => Err(Error::Usage(format!("unknown algorithm '{other}' (expected naive|sorted|stream)"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Naive => "naive",
            Algorithm::Sorted => "sorted",
            Algorithm::Stream => "stream",
        })
    }
}
