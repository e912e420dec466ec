use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::logreal::LogReal;
use crate::numeric::x_ln_y;

use super::params::snap_integral;

fn check_probability(op: &'static str, name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(op, format!("{name} must be a probability, got {x}")));
    }
    Ok(())
}

/// Natural-log binary entropy, `-x ln x - (1-x) ln(1-x)`.
pub(crate) fn entropy_nats(x: f64) -> f64 {
    -x_ln_y(x, x.ln()) - x_ln_y(1.0 - x, (-x).ln_1p())
}

/// Binary entropy `Hb(x) = -x log₂ x - (1-x) log₂(1-x)` with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_probability("binary_entropy", "x", x)?;
    Ok((entropy_nats(x) / LN_2).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KlBase {
    Two,
    E,
}

/// Natural-log divergence; `+∞` when `y` fails absolute continuity.
pub(crate) fn kl_nats(x: f64, y: f64) -> f64 {
    fn term(a: f64, ln_a: f64, b: f64, ln_b: f64) -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (ln_a - ln_b)
        }
    }
    let d = term(x, x.ln(), y, y.ln()) + term(1.0 - x, (-x).ln_1p(), 1.0 - y, (-y).ln_1p());
    d.max(0.0)
}

/// Kullback–Leibler divergence `D(x‖y)` between Bernoulli distributions.
/// Returns `+∞` when `y ∈ {0, 1}` and `x` puts mass where `y` has none.
pub fn kl_divergence(x: f64, y: f64, base: KlBase) -> Result<f64> {
    check_probability("kl_divergence", "x", x)?;
    check_probability("kl_divergence", "y", y)?;
    let d = kl_nats(x, y);
    Ok(match base {
        KlBase::E => d,
        KlBase::Two => d / LN_2,
    })
}

/// Entropy bounds on `C(n, xn)` for integral `xn`:
/// `2^{Hb(x)n}/√(8nx(1-x)) <= C(n, xn) <= 2^{Hb(x)n}/√(πnx(1-x))`.
pub fn binom_coeff_bounds(n: u64, x: f64) -> Result<(LogReal, LogReal)> {
    const OP: &str = "binom_coeff_bounds";
    if n == 0 {
        return Err(Error::domain(OP, "n must be positive"));
    }
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(OP, format!("need 0 < x < 1, got {x}")));
    }
    let k =
        snap_integral(n, x).ok_or_else(|| Error::domain(OP, format!("x·n = {} is not an integer", x * n as f64)))?;
    let x = k as f64 / n as f64;
    let nf = n as f64;
    let ln_main = entropy_nats(x) * nf;
    let spread = nf * x * (1.0 - x);
    Ok((LogReal::from_ln(ln_main - 0.5 * (8.0 * spread).ln()), LogReal::from_ln(ln_main - 0.5 * (PI * spread).ln())))
}

/// Bounds on `(1-x)^n` and `1-(1-x)^n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyProbBounds {
    /// `e^{-nx}(1 - nx²) <= (1-x)^n`
    pub power_lower: f64,
    /// `(1-x)^n <= e^{-nx}`
    pub power_upper: f64,
    /// `nx/(1+nx) <= 1-(1-x)^n`
    pub complement_lower: f64,
    /// `1-(1-x)^n <= nx`
    pub complement_upper: f64,
}

pub fn poly_prob_bounds(n: u64, x: f64) -> Result<PolyProbBounds> {
    check_probability("poly_prob_bounds", "x", x)?;
    let nx = n as f64 * x;
    let decay = (-nx).exp();
    Ok(PolyProbBounds {
        power_lower: decay * (1.0 - nx * x),
        power_upper: decay,
        complement_lower: nx / (1.0 + nx),
        complement_upper: nx,
    })
}
