use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use crate::edge::{EdgeSet, MAX_UNIVERSE};
use crate::error::{Error, Result};

/// An ordered multiset of edges over a common universe `[n]`.
///
/// The order is the trial order of the sampler. `len()` is `|H|` (with
/// multiplicity) and [`count_distinct`](Self::count_distinct) is `‖H‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiHypergraph {
    universe: usize,
    edges: Vec<EdgeSet>,
}

impl MultiHypergraph {
    pub fn new(universe: usize, edges: Vec<EdgeSet>) -> Result<Self> {
        if universe == 0 || universe > MAX_UNIVERSE {
            return Err(Error::Usage(format!("universe size must lie in [1, {MAX_UNIVERSE}], got {universe}")));
        }
        if let Some(bad) = edges.iter().find(|e| e.universe_size() != universe) {
            return Err(Error::Usage(format!(
                "edge over universe {} in a hypergraph over universe {universe}",
                bad.universe_size()
            )));
        }
        Ok(MultiHypergraph { universe, edges })
    }

    pub(crate) fn from_parts_unchecked(universe: usize, edges: Vec<EdgeSet>) -> Self {
        MultiHypergraph { universe, edges }
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn edges(&self) -> &[EdgeSet] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<EdgeSet> {
        self.edges
    }

    /// `|H|`, the number of edges counted with multiplicity.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `‖H‖`, the size of the support.
    pub fn count_distinct(&self) -> usize {
        self.edges.iter().collect::<HashSet<_>>().len()
    }

    /// The hypergraph of complemented edges, in the same order.
    pub fn complement(&self) -> MultiHypergraph {
        MultiHypergraph { universe: self.universe, edges: self.edges.iter().map(EdgeSet::complement).collect() }
    }

    /// Renders the text format: a header line `n <universe_size>` followed by
    /// one canonical edge per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges.len() * 8);
        let _ = writeln!(out, "n {}", self.universe);
        for e in &self.edges {
            let _ = writeln!(out, "{e}");
        }
        out
    }

    pub fn write_text<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n {}", self.universe)?;
        for e in &self.edges {
            writeln!(w, "{e}")?;
        }
        w.flush()
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        Self::read_text(text.as_bytes())
    }

    /// Reads the text format. Blank lines are skipped; every other line after
    /// the header must be a canonical edge.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut universe = None;
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse { line: lineno, reason: e.to_string() })?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            match universe {
                None => universe = Some(parse_header(trimmed, lineno)?),
                Some(n) => {
                    let e = EdgeSet::parse(n, trimmed).map_err(|reason| Error::Parse { line: lineno, reason })?;
                    edges.push(e);
                }
            }
        }
        let universe = universe.ok_or(Error::Parse { line: 1, reason: "missing 'n <universe_size>' header".into() })?;
        Ok(MultiHypergraph { universe, edges })
    }
}

fn parse_header(line: &str, lineno: usize) -> Result<usize> {
    let bad = |reason: String| Error::Parse { line: lineno, reason };
    let mut toks = line.split_whitespace();
    if toks.next() != Some("n") {
        return Err(bad(format!("expected 'n <universe_size>', got '{line}'")));
    }
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(format!("expected 'n <universe_size>', got '{line}'")))?;
    if toks.next().is_some() {
        return Err(bad("trailing tokens after universe size".into()));
    }
    if n == 0 || n > MAX_UNIVERSE {
        return Err(bad(format!("universe size must lie in [1, {MAX_UNIVERSE}], got {n}")));
    }
    Ok(n)
}
