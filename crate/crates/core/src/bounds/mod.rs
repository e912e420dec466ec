//! Closed-form analytic quantities for `B(n, m, p)`: information measures,
//! elementary inequalities, sharpened binomial tail bounds, survival
//! (weighting) factors, expectation sandwiches, regimes and the maximum.
//!
//! Everything probability-like is computed in the log domain ([`LogReal`]),
//! since `m` ranges up to `(1-p)^{-n}` and beyond.
//!
//! [`LogReal`]: crate::LogReal

mod expectation;
mod info;
mod params;
mod regime;
mod tail;

pub use expectation::{
    expected_distinct_range, expected_min_exact, expected_min_sandwich, weighting_factor, weighting_factor_bounds,
    DistinctRange, ExpectationSandwich,
};
pub use info::{binary_entropy, binom_coeff_bounds, kl_divergence, poly_prob_bounds, KlBase, PolyProbBounds};
pub use params::{snap_integral, DerivedParams, EdgeCount};
pub use regime::{argmax_m, info_exponent, regime_classify, Margins, Regime, RegimeClassification};
pub use tail::{chernoff_integral, chernoff_sharp, cramer_rate, klar_ratio_bound, Tail, TailBoundPair, TailConstants};
