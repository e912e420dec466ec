//! One-point summary of every analytic quantity for `(n, p, m)`.

use serde::Serialize;

use crate::bounds::{
    argmax_m, expected_distinct_range, expected_min_exact, expected_min_sandwich, regime_classify, DerivedParams,
    EdgeCount, ExpectationSandwich, Margins, Regime,
};
use crate::error::Result;
use crate::logreal::LogReal;

/// Analytic summary of `B(n, m, p)`. The `α`-dependent fields are `None` for
/// `p ∈ {0, 1}`, where `α` is undefined and `|min| = 1` deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: u64,
    pub p: f64,
    pub m: EdgeCount,
    pub alpha: Option<f64>,
    pub i_star: Option<f64>,
    pub regime: Option<Regime>,
    pub near_transition: bool,
    pub regime_magnitude: Option<LogReal>,
    pub heuristic: bool,
    pub margins: Margins,
    pub sandwich: ExpectationSandwich,
    pub exact: LogReal,
    pub distinct_exact: LogReal,
    pub m_star: LogReal,
    pub max_value_estimate: LogReal,
}

impl BoundsReport {
    pub fn compute(n: u64, p: f64, m: EdgeCount, margins: Margins) -> Result<Self> {
        let sandwich = expected_min_sandwich(n, p, m)?;
        let exact = expected_min_exact(n, p, m)?;
        let distinct_exact = expected_distinct_range(n, p, m, 0, n)?.exact;
        let (m_star, max_value_estimate) = argmax_m(n, p);
        let mut report = BoundsReport {
            n,
            p,
            m,
            alpha: None,
            i_star: None,
            regime: None,
            near_transition: false,
            regime_magnitude: None,
            heuristic: false,
            margins,
            sandwich,
            exact,
            distinct_exact,
            m_star,
            max_value_estimate,
        };
        if p > 0.0 && p < 1.0 {
            let d = DerivedParams::new(n, p, m)?;
            let c = regime_classify(&d, margins);
            report.alpha = Some(d.alpha);
            report.i_star = Some(d.i_star);
            report.regime = Some(c.regime);
            report.near_transition = c.near_transition;
            report.regime_magnitude = c.magnitude;
            report.heuristic = c.heuristic;
        }
        Ok(report)
    }
}
