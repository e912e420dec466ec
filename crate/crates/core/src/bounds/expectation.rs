//! Survival (weighting) factors and the expected number of minimal and
//! distinct edges of `B(n, m, p)`.
//!
//! With `X ~` one trial, a fixed set `S` of size `i` is minimal iff it is drawn
//! at least once and no trial draws a proper subset. Both events depend only on
//! `i`, which turns every expectation into a sum over `i = 0..=n`, evaluated
//! here term by term in the log domain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::logreal::LogReal;
use crate::numeric::{
    ln_1m_exp, ln_1m_exp_neg_exp, ln_add_exp, ln_binomial_row, ln_ln_1p, ln_neg_ln_1m, log_sum_exp, x_ln_y,
};

use super::params::EdgeCount;

/// `ln((1-q)^m)` from `ln q` and `ln m`.
fn ln_avoid(ln_q: f64, ln_m: f64) -> f64 {
    -(ln_m + ln_neg_ln_1m(ln_q)).exp()
}

/// `ln(1 - (1-s)^m)`: the log-probability that an outcome of per-trial
/// probability `s` occurs at least once in `m` trials.
fn ln_hit(ln_s: f64, ln_m: f64) -> f64 {
    ln_1m_exp_neg_exp(ln_m + ln_neg_ln_1m(ln_s))
}

/// Per-cardinality log quantities for fixed `(n, p)`.
struct Terms {
    n: u64,
    ln_p: f64,
    ln_q: f64,
    ln_binom: Vec<f64>,
}

impl Terms {
    fn new(n: u64, p: f64) -> Self {
        Terms { n, ln_p: p.ln(), ln_q: (-p).ln_1p(), ln_binom: ln_binomial_row(n) }
    }

    /// Without the binomial row, for single-term queries.
    fn new_light(n: u64, p: f64) -> Self {
        Terms { n, ln_p: p.ln(), ln_q: (-p).ln_1p(), ln_binom: Vec::new() }
    }

    /// `ln((1-p)^{n-i})`: a trial misses every vertex outside `[i]`.
    fn ln_inside(&self, i: u64) -> f64 {
        x_ln_y((self.n - i) as f64, self.ln_q)
    }

    /// `ln(p^i (1-p)^{n-i})`: a trial produces exactly `[i]`.
    fn ln_exact(&self, i: u64) -> f64 {
        x_ln_y(i as f64, self.ln_p) + self.ln_inside(i)
    }

    /// `ln((1-p)^{n-i}(1-p^i))`: a trial produces a proper subset of `[i]`.
    fn ln_proper_subset(&self, i: u64) -> f64 {
        self.ln_inside(i) + ln_1m_exp(x_ln_y(i as f64, self.ln_p))
    }

    fn ln_weight(&self, i: u64, ln_m: f64) -> f64 {
        ln_avoid(self.ln_proper_subset(i), ln_m)
    }
}

fn check_p(op: &'static str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(op, format!("p must be a probability, got {p}")));
    }
    Ok(())
}

/// `w(i, m) = (1 - (1-p)^{n-i}(1-p^i))^m`, the probability that none of `m`
/// trials produces a proper subset of a fixed `i`-set. Non-increasing in `i`
/// and in `m`; `w(0, m) = 1` and `w(n, m) = p^{nm}`.
///
/// # Panics
///
/// If `i > n` or `p` is not a probability.
pub fn weighting_factor(n: u64, p: f64, i: u64, m: EdgeCount) -> LogReal {
    assert!(i <= n, "cardinality {i} exceeds n = {n}");
    assert!((0.0..=1.0).contains(&p), "probability {p} out of range");
    LogReal::from_ln(Terms::new_light(n, p).ln_weight(i, m.ln()))
}

/// Threshold sandwich for `0 < p < 1`, `0 < i < n`:
/// `exp(-m(1-p)^{n-i})(1 - m(1-p)^{2(n-i)}) <= w(i, m) <= exp(-m(1-p)^{n-i+1})`.
pub fn weighting_factor_bounds(n: u64, p: f64, i: u64, m: EdgeCount) -> Result<(LogReal, LogReal)> {
    const OP: &str = "weighting_factor_bounds";
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(OP, format!("need 0 < p < 1, got {p}")));
    }
    if !(0 < i && i < n) {
        return Err(Error::domain(OP, format!("need 0 < i < n, got i = {i}, n = {n}")));
    }
    let ln_q = (-p).ln_1p();
    let gap = (n - i) as f64;
    let ln_m = m.ln();
    let decay = LogReal::from_ln(-(ln_m + gap * ln_q).exp());
    let lower = decay * (LogReal::ONE - LogReal::from_ln(ln_m + 2.0 * gap * ln_q));
    let upper = LogReal::from_ln(-(ln_m + (gap + 1.0) * ln_q).exp());
    Ok((lower, upper))
}

/// The three bounds on `E|min(B(n, m, p))|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectationSandwich {
    /// `Σ C(n,i)(1-(1-p^i(1-p)^{n-i})^m)·w(i, m)`
    pub lower: LogReal,
    /// Same sum weighted by `w(i, m-1)`.
    pub upper_shifted: LogReal,
    /// `1 + (1/p)·lower`
    pub upper_scaled: LogReal,
}

impl ExpectationSandwich {
    pub fn upper(&self) -> LogReal {
        self.upper_shifted.min(self.upper_scaled)
    }
}

pub fn expected_min_sandwich(n: u64, p: f64, m: EdgeCount) -> Result<ExpectationSandwich> {
    check_p("expected_min_sandwich", p)?;
    if p == 0.0 || p == 1.0 {
        let one = LogReal::ONE;
        return Ok(ExpectationSandwich { lower: one, upper_shifted: one, upper_scaled: one });
    }
    let t = Terms::new(n, p);
    let ln_m = m.ln();
    let ln_m1 = m.minus_one().ln();
    let mut lower = Vec::with_capacity(n as usize + 1);
    let mut shifted = Vec::with_capacity(n as usize + 1);
    for i in 0..=n {
        let base = t.ln_binom[i as usize] + ln_hit(t.ln_exact(i), ln_m);
        let ln_sub = t.ln_proper_subset(i);
        lower.push(base + ln_avoid(ln_sub, ln_m));
        shifted.push(base + ln_avoid(ln_sub, ln_m1));
    }
    let lower = LogReal::from_ln(log_sum_exp(&lower));
    Ok(ExpectationSandwich {
        lower,
        upper_shifted: LogReal::from_ln(log_sum_exp(&shifted)),
        upper_scaled: LogReal::ONE + lower / LogReal::from_f64(p),
    })
}

/// Exact `E|min(B(n, m, p))| = Σ C(n,i)·[w(i, m) - (1-(1-p)^{n-i})^m]`.
///
/// The bracket is `P[no proper subset] - P[neither the set nor a proper subset]`.
/// It is evaluated as `w(i, m)·(1 - exp(-m·ln(1 + r)))` with
/// `r = (1-p)^{n-i} p^i / (1 - (1-p)^{n-i})`, which avoids cancelling two
/// nearly equal powers.
pub fn expected_min_exact(n: u64, p: f64, m: EdgeCount) -> Result<LogReal> {
    check_p("expected_min_exact", p)?;
    if p == 0.0 || p == 1.0 {
        return Ok(LogReal::ONE);
    }
    let t = Terms::new(n, p);
    let ln_m = m.ln();
    let terms: Vec<f64> = (0..=n)
        .map(|i| {
            let ln_w = t.ln_weight(i, ln_m);
            if i == n {
                // Every trial lies inside [n], so only the survival factor remains.
                return ln_w;
            }
            let ln_inside = t.ln_inside(i);
            let ln_r = ln_inside + x_ln_y(i as f64, t.ln_p) - ln_1m_exp(ln_inside);
            t.ln_binom[i as usize] + ln_w + ln_1m_exp_neg_exp(ln_m + ln_ln_1p(ln_r))
        })
        .collect();
    Ok(LogReal::from_ln(log_sum_exp(&terms)))
}

/// Expected number of distinct edges with cardinality in `[l, u]`, with its
/// binomial-tail sandwich `m/(1+m·pmax)·P[l<=Y<=u] <= exact <= m·P[l<=Y<=u]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistinctRange {
    pub exact: LogReal,
    pub lower: LogReal,
    pub upper: LogReal,
    /// `max_{l<=i<=u} p^i (1-p)^{n-i}`
    pub max_mass: LogReal,
    /// `P[l <= Y <= u]` for `Y ~ Bin(n, p)`
    pub range_probability: LogReal,
}

pub fn expected_distinct_range(n: u64, p: f64, m: EdgeCount, l: u64, u: u64) -> Result<DistinctRange> {
    const OP: &str = "expected_distinct_range";
    check_p(OP, p)?;
    if !(l <= u && u <= n) {
        return Err(Error::domain(OP, format!("need 0 <= l <= u <= n, got l = {l}, u = {u}, n = {n}")));
    }
    let t = Terms::new(n, p);
    let ln_m = m.ln();
    let exact: Vec<f64> = (l..=u).map(|i| t.ln_binom[i as usize] + ln_hit(t.ln_exact(i), ln_m)).collect();
    let mass: Vec<f64> = (l..=u).map(|i| t.ln_binom[i as usize] + t.ln_exact(i)).collect();
    // p^i (1-p)^{n-i} = (p/(1-p))^i (1-p)^n is monotone in i, with direction set by the odds.
    let ln_max_mass = if p < 0.5 {
        t.ln_exact(l)
    } else if p == 0.5 {
        -(n as f64) * std::f64::consts::LN_2
    } else {
        t.ln_exact(u)
    };
    let ln_range = log_sum_exp(&mass);
    Ok(DistinctRange {
        exact: LogReal::from_ln(log_sum_exp(&exact)),
        lower: LogReal::from_ln(ln_m - ln_add_exp(0.0, ln_m + ln_max_mass) + ln_range),
        upper: LogReal::from_ln(ln_m + ln_range),
        max_mass: LogReal::from_ln(ln_max_mass),
        range_probability: LogReal::from_ln(ln_range),
    })
}
