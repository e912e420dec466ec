use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logreal::LogReal;

use super::info::kl_nats;
use super::params::snap_integral;

/// Which tail of `Y ~ Bin(n, p)` is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// `P[Y <= xn]`, for `x < p`.
    Lower,
    /// `P[Y >= xn]`, for `x > p`.
    Upper,
}

/// Prefactors `c` of the bounds `c · 2^{-D(x‖p)n} / √n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailConstants {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailBoundPair {
    pub tail: Tail,
    pub lower: LogReal,
    pub upper: LogReal,
    pub constants: TailConstants,
}

fn check_p(op: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(op, format!("need 0 < p < 1, got p = {p}")));
    }
    Ok(())
}

/// `2^{-D(x‖p)n}/√n` in natural logs.
fn ln_shared_factor(n: u64, p: f64, x: f64) -> f64 {
    let nf = n as f64;
    -kl_nats(x, p) * nf - 0.5 * nf.ln()
}

fn pair(tail: Tail, n: u64, p: f64, x: f64, constants: TailConstants) -> TailBoundPair {
    let shared = ln_shared_factor(n, p, x);
    TailBoundPair {
        tail,
        lower: LogReal::from_ln(constants.lower.ln() + shared),
        upper: LogReal::from_ln(constants.upper.ln() + shared),
        constants,
    }
}

/// Sharpened Chernoff–Hoeffding bounds for arbitrary real `x`.
///
/// Lower tail (`1/n <= x < p`):
/// `(1-p)√x / (2e√(2(1-x)))` and `√(1-x) / ((p-x)√(πx))` times `2^{-D(x‖p)n}/√n`.
/// The upper tail (`p < x <= 1 - 1/n`) is the lower tail of the complementary
/// variable, `P[Y >= xn] = P[n - Y <= (1-x)n]`.
///
/// The `√n` gain is impossible at `x = 0` and `x = p`, so those points are
/// rejected rather than clamped.
pub fn chernoff_sharp(n: u64, p: f64, x: f64, tail: Tail) -> Result<TailBoundPair> {
    const OP: &str = "chernoff_sharp";
    check_p(OP, p)?;
    if n == 0 {
        return Err(Error::domain(OP, "n must be positive"));
    }
    let edge = 1.0 / n as f64;
    let tol = 1e-12 * edge;
    let constants = match tail {
        Tail::Lower => {
            if !(x >= edge - tol && x < p) {
                return Err(Error::domain(
                    OP,
                    format!("lower tail requires 1/n <= x < p, got x = {x}, p = {p}, n = {n}"),
                ));
            }
            TailConstants {
                lower: (1.0 - p) * x.sqrt() / (2.0 * E * (2.0 * (1.0 - x)).sqrt()),
                upper: (1.0 - x).sqrt() / ((p - x) * (PI * x).sqrt()),
            }
        }
        Tail::Upper => {
            if !(x > p && x <= 1.0 - edge + tol) {
                return Err(Error::domain(
                    OP,
                    format!("upper tail requires p < x <= 1 - 1/n, got x = {x}, p = {p}, n = {n}"),
                ));
            }
            TailConstants {
                lower: p * (1.0 - x).sqrt() / (2.0 * E * (2.0 * x).sqrt()),
                upper: x.sqrt() / ((x - p) * (PI * (1.0 - x)).sqrt()),
            }
        }
    };
    Ok(pair(tail, n, p, x, constants))
}

/// Tighter bounds when `xn` is an integer: lower prefactor `1/√(8x(1-x))`;
/// upper `p√(1-x)/((p-x)√(πx))` for the lower tail and
/// `(1-p)√x/((x-p)√(π(1-x)))` for the upper tail.
pub fn chernoff_integral(n: u64, p: f64, x: f64, tail: Tail) -> Result<TailBoundPair> {
    const OP: &str = "chernoff_integral";
    check_p(OP, p)?;
    if n == 0 {
        return Err(Error::domain(OP, "n must be positive"));
    }
    let k =
        snap_integral(n, x).ok_or_else(|| Error::domain(OP, format!("x·n = {} is not an integer", x * n as f64)))?;
    let x = k as f64 / n as f64;
    let lower = 1.0 / (8.0 * x * (1.0 - x)).sqrt();
    let constants = match tail {
        Tail::Lower => {
            if !(x > 0.0 && x < p) {
                return Err(Error::domain(OP, format!("lower tail requires 0 < x < p, got x = {x}, p = {p}")));
            }
            TailConstants { lower, upper: p * (1.0 - x).sqrt() / ((p - x) * (PI * x).sqrt()) }
        }
        Tail::Upper => {
            if !(x > p && x < 1.0) {
                return Err(Error::domain(OP, format!("upper tail requires p < x < 1, got x = {x}, p = {p}")));
            }
            TailConstants { lower, upper: (1.0 - p) * x.sqrt() / ((x - p) * (PI * (1.0 - x)).sqrt()) }
        }
    };
    Ok(pair(tail, n, p, x, constants))
}

/// Bounds on `P[Y <= k] / P[Y = k]` for `k <= pn`:
/// `1 <= ratio <= p(n+1-k) / (n+1-k - (n+1)(1-p))`.
pub fn klar_ratio_bound(n: u64, p: f64, k: u64) -> Result<(f64, f64)> {
    const OP: &str = "klar_ratio_bound";
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(OP, format!("p must be a probability, got {p}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    if kf > p * nf + 1e-9 * nf.max(1.0) {
        return Err(Error::domain(OP, format!("requires k <= pn, got k = {k}, pn = {}", p * nf)));
    }
    // n+1-k - (n+1)(1-p) rearranged without cancellation.
    let denom = p * (nf + 1.0) - kf;
    if denom <= 0.0 {
        return Err(Error::domain(OP, format!("denominator p(n+1) - k = {denom} is not positive")));
    }
    Ok((1.0, p * (nf + 1.0 - kf) / denom))
}

/// Rate approximation `(1/n) ln P[ΣX_i >= xn] ≈ -D_e(x‖p) - ln(n)/(2n)`,
/// accurate to `O(1/n)`.
pub fn cramer_rate(n: u64, p: f64, x: f64) -> Result<f64> {
    const OP: &str = "cramer_rate";
    if !(p > 0.0 && p < x && x < 1.0) {
        return Err(Error::domain(OP, format!("requires 0 < p < x < 1, got p = {p}, x = {x}")));
    }
    let nf = n as f64;
    if nf < 1.0 / (1.0 - x) {
        return Err(Error::domain(OP, format!("requires n >= 1/(1-x) = {}, got n = {n}", 1.0 / (1.0 - x))));
    }
    Ok(-kl_nats(x, p) - nf.ln() / (2.0 * nf))
}
