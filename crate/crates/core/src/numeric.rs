//! Log-domain primitives. All functions take and return natural logarithms
//! and stay accurate when the underlying quantities underflow `f64`.

use std::f64::consts::LN_2;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `ln(e^a + e^b)`.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    if hi == f64::INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln Σ e^{x_i}`: terms are rescaled by the largest one and accumulated with
/// compensation. An empty sum is `-∞`.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: CompensatedSum = terms.iter().map(|&x| (x - max).exp()).collect();
    max + sum.value().ln()
}

/// `ln(1 - e^a)` for `a <= 0`.
pub fn ln_1m_exp(a: f64) -> f64 {
    if a > -LN_2 {
        (-a.exp_m1()).ln()
    } else {
        (-a.exp()).ln_1p()
    }
}

/// `ln(-ln(1 - q))` given `ln q`, i.e. the log of the per-trial hazard when an
/// event of probability `q` is avoided `m` times: `(1-q)^m = exp(-e^{ln m + result})`.
pub fn ln_neg_ln_1m(ln_q: f64) -> f64 {
    if ln_q == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if ln_q >= 0.0 {
        return f64::INFINITY;
    }
    if ln_q < -30.0 {
        // -ln(1-q) = q (1 + q/2 + q²/3 + ...)
        let q = ln_q.exp();
        return ln_q + (q / 2.0 + q * q / 3.0).ln_1p();
    }
    let l = ln_1m_exp(ln_q);
    if l == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        (-l).ln()
    }
}

/// `ln(ln(1 + r))` given `ln r`.
pub fn ln_ln_1p(ln_r: f64) -> f64 {
    if ln_r.is_infinite() {
        return ln_r;
    }
    if ln_r < -30.0 {
        let r = ln_r.exp();
        return ln_r + (-r / 2.0 + r * r / 3.0).ln_1p();
    }
    if ln_r > 36.0 {
        return (ln_r + (-ln_r).exp().ln_1p()).ln();
    }
    ln_r.exp().ln_1p().ln()
}

/// `ln(1 - exp(-e^z))`.
pub fn ln_1m_exp_neg_exp(z: f64) -> f64 {
    if z == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let t = z.exp();
    if z < -30.0 {
        // 1 - e^{-t} = t (1 - t/2 + t²/6 - ...)
        return z + (-t / 2.0 + t * t / 6.0).ln_1p();
    }
    ln_1m_exp(-t)
}

/// `x · ln y` with the convention `0 · ln 0 = 0`.
#[inline]
pub fn x_ln_y(x: f64, ln_y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * ln_y
    }
}

/// `ln C(n, k)`, summing `ln((n-k+j)/j)` with compensation; `-∞` for `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let base = (n - k) as f64;
    (1..=k).map(|j| ((base + j as f64) / j as f64).ln()).collect::<CompensatedSum>().value()
}

/// `[ln C(n, 0), ..., ln C(n, n)]`.
pub fn ln_binomial_row(n: u64) -> Vec<f64> {
    let len = n as usize + 1;
    let mut row = vec![0.0; len];
    let mut acc = CompensatedSum::new();
    // Fill the lower half and mirror it, which halves the accumulated error.
    for k in 0..n / 2 {
        acc.add(((n - k) as f64 / (k + 1) as f64).ln());
        row[k as usize + 1] = acc.value();
    }
    for k in (n as usize / 2 + 1)..len {
        row[k] = row[len - 1 - k];
    }
    row
}

/// Natural log of the `Bin(n, p)` probability mass at every `k = 0..=n`.
pub fn ln_binomial_pmf_row(n: u64, p: f64) -> Vec<f64> {
    let ln_p = p.ln();
    let ln_q = (-p).ln_1p();
    ln_binomial_row(n)
        .into_iter()
        .enumerate()
        .map(|(k, c)| c + x_ln_y(k as f64, ln_p) + x_ln_y((n - k as u64) as f64, ln_q))
        .collect()
}
