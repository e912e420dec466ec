use std::f64::consts::LN_2;

use serde::Serialize;

use crate::logreal::LogReal;

use super::info::entropy_nats;
use super::params::DerivedParams;

/// Margins `ε` (above `α = 1-p`) and `ε′` (below `α = 1`) that delimit the
/// information-theoretic regime. Constants of that regime depend on them, so
/// reports always echo the margins in use.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Margins {
    pub eps: f64,
    pub eps_prime: f64,
}

impl Default for Margins {
    fn default() -> Self {
        Margins { eps: 0.05, eps_prime: 0.05 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `α <= 1-p`: `E|min| = Θ(m)`.
    Linear,
    /// `1-p+ε <= α <= 1-ε′`: `E|min| = Θ(2^{(Hb(α)+(1-α)log₂p)n}/√n)`.
    InfoTheoretic,
    /// `log_{1/(1-p)} m >= n + 10·log₂ n`: `E|min| = 1 + o(1)`.
    Collapsed,
    /// Between the regimes above, where no magnitude is asserted.
    Transition,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Linear => "linear",
            Regime::InfoTheoretic => "info_theoretic",
            Regime::Collapsed => "collapsed",
            Regime::Transition => "transition",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegimeClassification {
    pub regime: Regime,
    pub margins: Margins,
    /// Order-of-magnitude estimate of `E|min|`; `None` in the transition zones.
    pub magnitude: Option<LogReal>,
    /// `α` lies within `ε` of `1-p` or within `ε′` of `1`.
    pub near_transition: bool,
    /// The collapse test is a finite-n stand-in for an asymptotic condition.
    pub heuristic: bool,
}

/// `Hb(α) + (1-α)·log₂ p`, the growth exponent (base 2, per vertex) of the
/// information-theoretic regime. Maximal at `α = 1/(1+p)` with value `log₂(1+p)`.
pub fn info_exponent(alpha: f64, p: f64) -> f64 {
    (entropy_nats(alpha) + (1.0 - alpha) * p.ln()) / LN_2
}

pub fn regime_classify(d: &DerivedParams, margins: Margins) -> RegimeClassification {
    let (n, p, alpha) = (d.n as f64, d.p, d.alpha);
    let near_transition = (alpha - (1.0 - p)).abs() < margins.eps || (alpha - 1.0).abs() < margins.eps_prime;
    let collapsed = alpha * n >= n + 10.0 * n.log2();
    let (regime, magnitude) = if collapsed {
        (Regime::Collapsed, Some(LogReal::ONE))
    } else if alpha <= 1.0 - p {
        (Regime::Linear, Some(d.m.value()))
    } else if alpha >= 1.0 - p + margins.eps && alpha <= 1.0 - margins.eps_prime {
        let ln_mag = info_exponent(alpha, p) * n * LN_2 - 0.5 * n.ln();
        (Regime::InfoTheoretic, Some(LogReal::from_ln(ln_mag)))
    } else {
        (Regime::Transition, None)
    };
    RegimeClassification { regime, margins, magnitude, near_transition, heuristic: collapsed }
}

/// The maximizing number of trials `m* = (1-p)^{-n/(1+p)}` and the order of the
/// maximum, `(1+p)^n/√n`. For `p ∈ {0, 1}` the minimization always has one
/// edge, so any `m` attains the maximum `1`; `(1, 1)` is returned.
pub fn argmax_m(n: u64, p: f64) -> (LogReal, LogReal) {
    if p <= 0.0 || p >= 1.0 {
        return (LogReal::ONE, LogReal::ONE);
    }
    let nf = n as f64;
    let m_star = LogReal::from_ln(-nf / (1.0 + p) * (-p).ln_1p());
    let value = LogReal::from_ln(nf * p.ln_1p() - 0.5 * nf.ln());
    (m_star, value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::EdgeCount;

    #[test]
    fn linear_example() {
        let d = DerivedParams::new(40, 0.5, EdgeCount::new(1 << 10).unwrap()).unwrap();
        let c = regime_classify(&d, Margins::default());
        assert_eq!(c.regime, Regime::Linear);
        assert!((c.magnitude.unwrap().to_f64() - 1024.0).abs() < 1e-9);
        assert!(!c.near_transition);
    }

    #[test]
    fn collapsed_example() {
        let n = 50u64;
        let ln_m = (n as f64 + 10.0 * (n as f64).log2()) * LN_2;
        let d = DerivedParams::new(n, 0.5, EdgeCount::from_ln(ln_m * (1.0 + 1e-12)).unwrap()).unwrap();
        let c = regime_classify(&d, Margins::default());
        assert_eq!(c.regime, Regime::Collapsed);
        assert!(c.heuristic);
        assert_eq!(c.magnitude, Some(LogReal::ONE));
    }

    #[test]
    fn info_and_transition_zones() {
        let p = 0.6;
        let classify = |alpha| regime_classify(&DerivedParams::from_alpha(10, p, alpha).unwrap(), Margins::default());
        assert_eq!(classify(0.4).regime, Regime::Linear);
        assert!(classify(0.4).near_transition);
        assert_eq!(classify(0.42).regime, Regime::Transition);
        assert!(classify(0.42).magnitude.is_none());
        assert_eq!(classify(0.625).regime, Regime::InfoTheoretic);
        assert_eq!(classify(0.97).regime, Regime::Transition);
        assert_eq!(classify(1.5).regime, Regime::Transition);
    }

    #[test]
    fn info_magnitude_peaks_at_inverse_one_plus_p() {
        let p = 0.6;
        let best = (1..1000)
            .map(|k| k as f64 / 1000.0)
            .max_by(|a, b| info_exponent(*a, p).total_cmp(&info_exponent(*b, p)))
            .unwrap();
        assert!((best - 1.0 / 1.6).abs() <= 1e-3);
        assert!((info_exponent(1.0 / 1.6, p) - 1.6f64.log2()).abs() < 1e-14);
    }

    #[test]
    fn argmax_values() {
        let (m_star, value) = argmax_m(100, 0.6);
        assert!((m_star.ln() - 100.0 / 1.6 * -(0.4f64).ln()).abs() < 1e-12);
        assert!((value.ln() - (100.0 * 1.6f64.ln() - 0.5 * 100f64.ln())).abs() < 1e-12);
        assert_eq!(argmax_m(100, 0.0).1, LogReal::ONE);
        assert_eq!(argmax_m(100, 1.0).1, LogReal::ONE);
    }
}
