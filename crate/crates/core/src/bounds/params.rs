use serde::Serialize;

use crate::error::{Error, Result};
use crate::logreal::LogReal;

/// Number of trials `m >= 1`, real-valued so that analytic operations can
/// reach `m = (1-p)^{-αn}` far beyond integer range. Sampling rounds it.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct EdgeCount(LogReal);

impl EdgeCount {
    pub const ONE: EdgeCount = EdgeCount(LogReal::ONE);

    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("EdgeCount", "m must be at least 1"));
        }
        Ok(EdgeCount(LogReal::from_f64(m as f64)))
    }

    /// `m = e^{ln_m}`, requiring `ln_m >= 0`.
    pub fn from_ln(ln_m: f64) -> Result<Self> {
        if !(ln_m >= 0.0) || ln_m.is_infinite() {
            return Err(Error::domain("EdgeCount", format!("ln m must be finite and non-negative, got {ln_m}")));
        }
        Ok(EdgeCount(LogReal::from_ln(ln_m)))
    }

    /// `m = 1/(1-p)^{αn}`.
    pub fn from_alpha(n: u64, p: f64, alpha: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("EdgeCount::from_alpha", format!("alpha needs 0 < p < 1, got p = {p}")));
        }
        if !(alpha >= 0.0) || alpha.is_infinite() {
            return Err(Error::domain("EdgeCount::from_alpha", format!("alpha must be finite and >= 0, got {alpha}")));
        }
        Self::from_ln(alpha * n as f64 * -(-p).ln_1p())
    }

    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    pub fn value(self) -> LogReal {
        self.0
    }

    /// `m - 1`, which is zero for `m = 1`.
    pub fn minus_one(self) -> LogReal {
        self.0 - LogReal::ONE
    }

    /// Nearest integer, if it is exactly representable (`<= 2^53`).
    pub fn to_integer(self) -> Option<u64> {
        let v = self.0.to_f64().round();
        (v <= 9_007_199_254_740_992.0).then_some(v.max(1.0) as u64)
    }
}

/// Snaps `xn` to the nearest integer `k` if `|xn - k| <= 1e-9·n`.
pub fn snap_integral(n: u64, x: f64) -> Option<u64> {
    let xn = x * n as f64;
    let k = xn.round();
    ((xn - k).abs() <= 1e-9 * n as f64 && k >= 0.0).then_some(k as u64)
}

/// The parameters `α` and `i*` derived from `(n, p, m)`.
///
/// `α = -log_{1-p}(m)/n`, so `m = (1-p)^{-αn}`, and `i* = n + log_{1-p} m = (1-α)n`
/// is the cardinality at which the survival factor drops from ≈1 to ≈0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedParams {
    pub n: u64,
    pub p: f64,
    pub m: EdgeCount,
    pub alpha: f64,
    pub i_star: f64,
}

impl DerivedParams {
    pub fn new(n: u64, p: f64, m: EdgeCount) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("DerivedParams", "n must be positive"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("DerivedParams", format!("alpha is defined only for 0 < p < 1, got {p}")));
        }
        let alpha = m.ln() / (n as f64 * -(-p).ln_1p());
        Ok(DerivedParams { n, p, m, alpha, i_star: (1.0 - alpha) * n as f64 })
    }

    pub fn from_alpha(n: u64, p: f64, alpha: f64) -> Result<Self> {
        Self::new(n, p, EdgeCount::from_alpha(n, p, alpha)?)
    }
}
