//! Random multi-hypergraphs `B(n, m, p)` and their minimizations: sampling,
//! minimization algorithms, closed-form bounds on the expected number of
//! minimal edges, and brute-force oracles for small instances.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod edge;
pub mod error;
pub mod hypergraph;
pub mod logreal;
pub mod minimize;
pub mod numeric;
pub mod oracle;
pub mod report;
pub mod sampler;

pub use bounds::{DerivedParams, EdgeCount, Margins, Regime, RegimeClassification, TailBoundPair};
pub use edge::EdgeSet;
pub use error::{Error, Result};
pub use hypergraph::MultiHypergraph;
pub use logreal::LogReal;
pub use minimize::{Algorithm, Antichain};
pub use report::BoundsReport;
pub use sampler::ModelParams;
