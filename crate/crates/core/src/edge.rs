use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest supported universe size.
pub const MAX_UNIVERSE: usize = 1 << 16;

pub(crate) type Words = SmallVec<[u64; 2]>;

#[inline]
pub(crate) fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

/// `true` iff every bit of `a` is also set in `b`.
#[inline]
pub(crate) fn words_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x & !y == 0)
}

/// A hyperedge: a subset of the universe `[n] = {1, ..., n}`, stored as a
/// bit vector in 64-bit blocks. Vertex `v` occupies bit `v - 1`.
///
/// Equality and hashing are defined on `(universe_size, membership)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    universe: u32,
    words: Words,
}

impl EdgeSet {
    /// The empty edge over a universe of `universe` vertices.
    pub fn empty(universe: usize) -> Result<Self> {
        check_universe(universe)?;
        Ok(Self::empty_unchecked(universe))
    }

    pub(crate) fn empty_unchecked(universe: usize) -> Self {
        EdgeSet { universe: universe as u32, words: smallvec::smallvec![0; word_count(universe)] }
    }

    /// The full edge `[n]`.
    pub fn full(universe: usize) -> Result<Self> {
        let mut e = Self::empty(universe)?;
        for w in e.words.iter_mut() {
            *w = u64::MAX;
        }
        e.clear_tail();
        Ok(e)
    }

    /// Builds an edge from 1-based vertex indices in any order.
    ///
    /// Repeated vertices are rejected since an edge is a set.
    pub fn from_vertices(universe: usize, vertices: &[usize]) -> Result<Self> {
        let mut e = Self::empty(universe)?;
        for &v in vertices {
            if v == 0 || v > universe {
                return Err(Error::Usage(format!("vertex {v} outside [1, {universe}]")));
            }
            if e.contains(v) {
                return Err(Error::Usage(format!("vertex {v} repeated within one edge")));
            }
            e.insert_unchecked(v - 1);
        }
        Ok(e)
    }

    /// Builds an edge over a universe of at most 64 vertices from a bit mask
    /// (bit `v - 1` set iff vertex `v` is present).
    pub fn from_mask(universe: usize, mask: u64) -> Result<Self> {
        if universe > 64 {
            return Err(Error::Usage(format!("mask construction needs universe <= 64, got {universe}")));
        }
        if universe < 64 && mask >> universe != 0 {
            return Err(Error::Usage("mask has bits outside the universe".into()));
        }
        let mut e = Self::empty(universe)?;
        e.words[0] = mask;
        Ok(e)
    }

    #[inline]
    pub(crate) fn insert_unchecked(&mut self, bit: usize) {
        self.words[bit / 64] |= 1u64 << (bit % 64);
    }

    fn clear_tail(&mut self) {
        let rem = self.universe as usize % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe_size(&self) -> usize {
        self.universe as usize
    }

    /// Number of vertices in the edge.
    pub fn cardinality(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Membership test for the 1-based vertex `v`; out-of-range vertices are absent.
    pub fn contains(&self, v: usize) -> bool {
        if v == 0 || v > self.universe as usize {
            return false;
        }
        let bit = v - 1;
        self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    /// Vertices in increasing order, 1-based.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + tz + 1)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &EdgeSet) -> Result<bool> {
        self.check_same_universe(other)?;
        Ok(words_subset(&self.words, &other.words))
    }

    /// `self ⊊ other`.
    pub fn is_proper_subset(&self, other: &EdgeSet) -> Result<bool> {
        Ok(self.is_subset(other)? && self.words != other.words)
    }

    /// The complement `[n] \ self`. Minimizing complemented edges yields the
    /// maximization of the original hypergraph.
    pub fn complement(&self) -> EdgeSet {
        let mut e = EdgeSet { universe: self.universe, words: self.words.iter().map(|w| !w).collect() };
        e.clear_tail();
        e
    }

    pub(crate) fn check_same_universe(&self, other: &EdgeSet) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::Usage(format!(
                "edges over different universes ({} vs {})",
                self.universe, other.universe
            )));
        }
        Ok(())
    }

    /// Parses the canonical textual form: strictly increasing 1-based vertex
    /// indices separated by whitespace, or `-` for the empty edge.
    pub fn parse(universe: usize, text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        if text == "-" {
            return Self::empty(universe).map_err(|e| e.to_string());
        }
        if text.is_empty() {
            return Err("empty edge must be written as '-'".into());
        }
        let mut e = Self::empty(universe).map_err(|e| e.to_string())?;
        let mut prev = 0usize;
        for tok in text.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| format!("invalid vertex index '{tok}'"))?;
            if v == 0 || v > universe {
                return Err(format!("vertex {v} outside [1, {universe}]"));
            }
            if v <= prev {
                return Err(format!("vertex indices not strictly increasing ({prev} then {v})"));
            }
            e.insert_unchecked(v - 1);
            prev = v;
        }
        Ok(e)
    }
}

fn check_universe(universe: usize) -> Result<()> {
    if universe == 0 || universe > MAX_UNIVERSE {
        return Err(Error::Usage(format!("universe size must lie in [1, {MAX_UNIVERSE}], got {universe}")));
    }
    Ok(())
}

/// Canonical form: `1 3 5`, or `-` for the empty edge.
impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}/{}", self, self.universe)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, vs: &[usize]) -> EdgeSet {
        EdgeSet::from_vertices(n, vs).unwrap()
    }

    #[test]
    fn subset_examples() {
        assert!(e(4, &[]).is_subset(&e(4, &[1, 3])).unwrap());
        assert!(!e(4, &[1, 3]).is_proper_subset(&e(4, &[1, 3])).unwrap());
        assert!(e(4, &[1, 3]).is_subset(&e(4, &[1, 3])).unwrap());
        assert!(e(4, &[2]).is_proper_subset(&e(4, &[1, 2, 4])).unwrap());
        assert!(!e(4, &[3]).is_subset(&e(4, &[1, 2, 4])).unwrap());
    }

    #[test]
    fn mismatched_universe_is_usage_error() {
        let err = e(4, &[1]).is_subset(&e(5, &[1])).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn multiword_edges() {
        let a = e(130, &[1, 64, 65, 130]);
        assert_eq!(a.cardinality(), 4);
        assert_eq!(a.vertices().collect::<Vec<_>>(), vec![1, 64, 65, 130]);
        let c = a.complement();
        assert_eq!(c.cardinality(), 126);
        assert!(!c.contains(130));
        assert!(c.contains(129));
        assert_eq!(c.complement(), a);
        assert_eq!(EdgeSet::full(130).unwrap().cardinality(), 130);
    }

    #[test]
    fn canonical_text() {
        assert_eq!(e(5, &[3, 1]).to_string(), "1 3");
        assert_eq!(e(5, &[]).to_string(), "-");
        assert_eq!(EdgeSet::parse(5, "1 3").unwrap(), e(5, &[1, 3]));
        assert_eq!(EdgeSet::parse(5, "-").unwrap(), e(5, &[]));
        assert!(EdgeSet::parse(5, "3 1").is_err());
        assert!(EdgeSet::parse(5, "1 1").is_err());
        assert!(EdgeSet::parse(5, "6").is_err());
        assert!(EdgeSet::parse(5, "0").is_err());
        assert!(EdgeSet::parse(5, "").is_err());
    }

    #[test]
    fn mask_construction() {
        assert_eq!(EdgeSet::from_mask(3, 0b101).unwrap(), e(3, &[1, 3]));
        assert!(EdgeSet::from_mask(3, 0b1000).is_err());
        assert_eq!(EdgeSet::from_mask(64, u64::MAX).unwrap().cardinality(), 64);
    }

    #[test]
    fn universe_limits() {
        assert!(EdgeSet::empty(0).is_err());
        assert!(EdgeSet::empty(MAX_UNIVERSE).is_ok());
        assert!(EdgeSet::empty(MAX_UNIVERSE + 1).is_err());
        assert!(EdgeSet::from_vertices(3, &[2, 2]).is_err());
    }
}
