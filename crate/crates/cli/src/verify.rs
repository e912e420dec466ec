//! The verification suite: every analytic bound against its exact oracle on
//! fixed grids.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use hypermin_core::bounds::{
    binom_coeff_bounds, chernoff_integral, chernoff_sharp, expected_distinct_range, expected_min_exact,
    expected_min_sandwich, klar_ratio_bound, poly_prob_bounds, snap_integral, weighting_factor,
    weighting_factor_bounds, EdgeCount, Tail, TailBoundPair,
};
use hypermin_core::minimize::{is_antichain, minimize_naive, minimize_sorted, minimize_streaming};
use hypermin_core::numeric::ln_binomial;
use hypermin_core::oracle::{
    enumerate_conditional_survival, enumerate_expected_min, exact_binomial_tail, exact_binomial_tail_rational,
    ln_big_rational, Direction,
};
use hypermin_core::sampler::{derive_seed, sample_hypergraph};
use hypermin_core::{LogReal, ModelParams};

const SLACK: f64 = 1e-9;
const SHOWN_FAILURES: usize = 20;

pub type ChernoffFn = fn(u64, f64, f64, Tail) -> hypermin_core::Result<TailBoundPair>;

/// Replaceable entry points, so that a deliberately broken bound can be
/// shown to make the suite fail.
#[derive(Clone, Copy)]
pub struct VerifyHooks {
    pub chernoff_sharp: ChernoffFn,
}

impl Default for VerifyHooks {
    fn default() -> Self {
        VerifyHooks { chernoff_sharp }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Family {
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl Family {
    fn new(name: &'static str) -> Self {
        Family { name, ..Family::default() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn within(&mut self, lower: LogReal, value: LogReal, upper: LogReal, describe: impl FnOnce() -> String) {
        let ok = lower.le_within(value, SLACK) && value.le_within(upper, SLACK);
        self.check(ok, || format!("{}: {value} outside [{lower}, {upper}]", describe()));
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub families: Vec<Family>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(|f| f.failures.is_empty())
    }

    pub fn total_checks(&self) -> u64 {
        self.families.iter().map(|f| f.checks).sum()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for f in &self.families {
            let status = if f.failures.is_empty() { "ok" } else { "FAILED" };
            let _ = writeln!(s, "{:<34} {:>7} checks  {:>5} failures  {status}", f.name, f.checks, f.failures.len());
            for msg in f.failures.iter().take(SHOWN_FAILURES) {
                let _ = writeln!(s, "    {msg}");
            }
            if f.failures.len() > SHOWN_FAILURES {
                let _ = writeln!(s, "    ... {} more", f.failures.len() - SHOWN_FAILURES);
            }
        }
        let failed = self.families.iter().filter(|f| !f.failures.is_empty()).count();
        let _ = writeln!(
            s,
            "verify: {} checks in {} families, {failed} families failed",
            self.total_checks(),
            self.families.len()
        );
        s
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn m(v: u64) -> EdgeCount {
    EdgeCount::new(v).expect("positive count")
}

fn enumeration() -> Family {
    let mut f = Family::new("enumerate_expected_min");
    for n in 1..=4usize {
        for mm in 1..=12 / n {
            for (num, den) in [(1, 4), (1, 2), (3, 4)] {
                let exact = enumerate_expected_min(n, mm, &ratio(num, den)).expect("within the cap");
                let exact = exact.to_f64().unwrap_or(f64::NAN);
                let closed = expected_min_exact(n as u64, num as f64 / den as f64, m(mm as u64));
                let closed = closed.map(|v| v.to_f64()).unwrap_or(f64::NAN);
                f.check((exact - closed).abs() <= 1e-12, || {
                    format!("(n={n}, m={mm}, p={num}/{den}): enumeration {exact} vs closed form {closed}")
                });
            }
        }
    }
    f
}

fn sandwich() -> Family {
    let mut f = Family::new("expected_min_sandwich");
    for n in [1u64, 2, 4, 8, 12, 16, 40] {
        for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
            for e in 0..=20 {
                let mm = m(1 << e);
                let (Ok(s), Ok(exact)) = (expected_min_sandwich(n, p, mm), expected_min_exact(n, p, mm)) else {
                    f.check(false, || format!("(n={n}, p={p}, m=2^{e}): evaluation error"));
                    continue;
                };
                f.within(s.lower, exact, s.upper(), || format!("(n={n}, p={p}, m=2^{e})"));
            }
        }
    }
    f
}

fn tail_exact(n: u64, p: f64, x: f64, tail: Tail) -> LogReal {
    let xn = x * n as f64;
    let (k, dir) = match tail {
        Tail::Lower => ((xn + 1e-9).floor() as u64, Direction::AtMost),
        Tail::Upper => ((xn - 1e-9).ceil() as u64, Direction::AtLeast),
    };
    exact_binomial_tail(n, p, k, dir).expect("k within [0, n]")
}

fn chernoff(hooks: &VerifyHooks) -> (Family, Family) {
    let mut general = Family::new("chernoff_sharp");
    let mut integral = Family::new("chernoff_integral");
    for n in [10u64, 50, 200, 1000, 5000] {
        let edge = 1.0 / n as f64;
        for p in [0.2, 0.5, 0.8] {
            for (tail, lo, hi) in [(Tail::Lower, edge, p), (Tail::Upper, p, 1.0 - edge)] {
                if hi <= lo {
                    continue;
                }
                let mut xs: Vec<f64> = (1..=20).map(|j| lo + (hi - lo) * j as f64 / 21.0).collect();
                let (klo, khi) = ((lo * n as f64).floor() as u64 + 1, (hi * n as f64).ceil() as u64 - 1);
                if klo <= khi {
                    xs.extend((0..20).map(|j| (klo + (khi - klo) * j / 19) as f64 / n as f64));
                }
                for x in xs {
                    let exact = tail_exact(n, p, x, tail);
                    let describe = || format!("(n={n}, p={p}, x={x}, {tail:?} tail)");
                    match (hooks.chernoff_sharp)(n, p, x, tail) {
                        Ok(b) => general.within(b.lower, exact, b.upper, describe),
                        Err(e) => general.check(false, || format!("{}: {e}", describe())),
                    }
                    if snap_integral(n, x).is_some() {
                        match chernoff_integral(n, p, x, tail) {
                            Ok(b) => integral.within(b.lower, exact, b.upper, describe),
                            Err(e) => integral.check(false, || format!("{}: {e}", describe())),
                        }
                    }
                }
            }
        }
    }
    (general, integral)
}

fn klar() -> Family {
    let mut f = Family::new("klar_ratio_bound");
    for n in 1..=200u64 {
        for p in [0.3, 0.5, 0.7] {
            for k in 0..=(p * n as f64 + 1e-9).floor() as u64 {
                let Ok((lo, hi)) = klar_ratio_bound(n, p, k) else { continue };
                let cdf = exact_binomial_tail(n, p, k, Direction::AtMost).expect("k <= n");
                let pmf = ln_binomial(n, k) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p();
                let r = (cdf.ln() - pmf).exp();
                f.check(lo <= r * (1.0 + 1e-9) && r <= hi * (1.0 + 1e-9), || {
                    format!("(n={n}, p={p}, k={k}): ratio {r} outside [{lo}, {hi}]")
                });
            }
        }
    }
    f
}

fn weighting() -> (Family, Family) {
    let mut bounds = Family::new("weighting_factor_bounds");
    let mut monotone = Family::new("weighting_factor monotonicity");
    for (n, p) in [(60u64, 0.5), (30, 0.2), (100, 0.8), (12, 0.6)] {
        for e in 0..=60 {
            let mm = EdgeCount::from_ln(e as f64 * 0.75).expect("non-negative");
            for i in 0..=n {
                let w = weighting_factor(n, p, i, mm);
                if 0 < i && i < n {
                    let (lo, hi) = weighting_factor_bounds(n, p, i, mm).expect("valid interior point");
                    bounds.within(lo, w, hi, || format!("(n={n}, p={p}, i={i}, ln m={})", mm.ln()));
                }
                if i < n {
                    let next = weighting_factor(n, p, i + 1, mm);
                    monotone.check(next <= w, || format!("(n={n}, p={p}, i={i}, ln m={}): increases in i", mm.ln()));
                }
                let more = weighting_factor(n, p, i, EdgeCount::from_ln(mm.ln() + 0.75).expect("non-negative"));
                monotone.check(more <= w, || format!("(n={n}, p={p}, i={i}, ln m={}): increases in m", mm.ln()));
            }
        }
    }
    (bounds, monotone)
}

fn distinct() -> Family {
    let mut f = Family::new("expected_distinct_range");
    for n in [1u64, 5, 12, 20, 40] {
        for p in [0.15, 0.3, 0.5, 0.85] {
            for e in 0..=24 {
                let mm = EdgeCount::from_ln(e as f64 * 0.7).expect("non-negative");
                for (l, u) in [(0, n), (0, n / 2), (n / 3, n)] {
                    let r = expected_distinct_range(n, p, mm, l, u).expect("valid range");
                    f.within(r.lower, r.exact, r.upper, || format!("(n={n}, p={p}, ln m={}, l={l}, u={u})", mm.ln()));
                }
                let exact_min = expected_min_exact(n, p, mm).expect("valid p");
                let all = expected_distinct_range(n, p, mm, 0, n).expect("valid range").exact;
                f.within(exact_min, all, mm.value(), || {
                    format!("(n={n}, p={p}, ln m={}): E|min| <= E||H|| <= m", mm.ln())
                });
            }
        }
    }
    f
}

fn elementary() -> (Family, Family) {
    let mut binom = Family::new("binom_coeff_bounds");
    for n in [1u64, 2, 10, 37, 100, 500, 2000] {
        for k in 1..n {
            let (lo, hi) = binom_coeff_bounds(n, k as f64 / n as f64).expect("integral point");
            let exact = LogReal::from_ln(ln_binomial(n, k));
            binom.within(lo, exact, hi, || format!("C({n}, {k})"));
        }
    }
    let mut poly = Family::new("poly_prob_bounds");
    for n in [0u64, 1, 2, 7, 50, 1000] {
        for j in 0..=40 {
            let x = j as f64 / 40.0;
            let b = poly_prob_bounds(n, x).expect("probability");
            let power = (1.0 - x).powi(n as i32);
            let tol = 1e-14;
            poly.check(b.power_lower <= power + tol && power <= b.power_upper + tol, || {
                format!("(n={n}, x={x}): (1-x)^n = {power} outside [{}, {}]", b.power_lower, b.power_upper)
            });
            poly.check(b.complement_lower <= 1.0 - power + tol && 1.0 - power <= b.complement_upper + tol, || {
                format!("(n={n}, x={x}): 1-(1-x)^n outside [{}, {}]", b.complement_lower, b.complement_upper)
            });
        }
    }
    (binom, poly)
}

fn tail_paths() -> Family {
    let mut f = Family::new("exact_binomial_tail dual path");
    for (n, num, den) in [(2000u64, 7, 10), (500, 1, 4), (120, 1, 2), (64, 3, 4)] {
        let p = num as f64 / den as f64;
        for k in (0..=n).step_by((n / 10) as usize) {
            for dir in [Direction::AtMost, Direction::AtLeast] {
                let log_path = exact_binomial_tail(n, p, k, dir).expect("k <= n").ln();
                let exact = exact_binomial_tail_rational(n, &ratio(num, den), k, dir).expect("k <= n");
                let rational = ln_big_rational(&exact);
                f.check((log_path - rational).abs() <= 1e-10 * rational.abs().max(1.0), || {
                    format!("(n={n}, p={p}, k={k}, {dir:?}): log path {log_path} vs rational {rational}")
                });
            }
        }
    }
    f
}

fn survival() -> Family {
    let mut f = Family::new("conditional survival");
    for a in 0..=20i64 {
        for b in 1..=20 - a {
            for mm in 1..=12 {
                let (lhs, rhs) = enumerate_conditional_survival(&ratio(a, 20), &ratio(b, 20), mm).expect("valid grid");
                f.check(lhs <= rhs, || format!("(pA={a}/20, pB={b}/20, m={mm}): {lhs} > {rhs}"));
            }
        }
    }
    f
}

fn minimization() -> Family {
    let mut f = Family::new("minimize equivalence");
    for index in 0..300u64 {
        let seed = derive_seed(0x5eed_0001, &[index]);
        let n = 1 + (seed % 64) as usize;
        let mm = 1 + (seed >> 8) % 200;
        let p = (1 + (seed >> 20) % 9) as f64 / 10.0;
        let h = sample_hypergraph(&ModelParams::new(n, mm, p, seed).expect("valid")).expect("small");
        let naive = minimize_naive(&h);
        let ok = minimize_sorted(&h) == naive && minimize_streaming(&h) == naive && is_antichain(naive.members());
        f.check(ok, || format!("(n={n}, m={mm}, p={p}, seed={seed}): algorithms disagree"));
    }
    f
}

pub fn run_verify() -> VerifyReport {
    run_verify_with(&VerifyHooks::default())
}

pub fn run_verify_with(hooks: &VerifyHooks) -> VerifyReport {
    let (general, integral) = chernoff(hooks);
    let (w_bounds, w_monotone) = weighting();
    let (binom, poly) = elementary();
    VerifyReport {
        families: vec![
            enumeration(),
            sandwich(),
            general,
            integral,
            klar(),
            w_bounds,
            w_monotone,
            distinct(),
            binom,
            poly,
            tail_paths(),
            survival(),
            minimization(),
        ],
    }
}
