//! Brute-force reference values in exact rational arithmetic.
//!
//! These are deliberately slow and simple; the analytic code in `bounds` is
//! checked against them on every instance small enough to enumerate.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::edge::EdgeSet;
use crate::error::{Error, Result};
use crate::hypergraph::MultiHypergraph;
use crate::logreal::LogReal;
use crate::minimize::minimize_naive;
use crate::numeric::{ln_binomial_pmf_row, log_sum_exp};

/// Largest number of outcome tuples `(2^n)^m` an enumeration may visit.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// The outcome space of `m` trials over `[n]`, admitted only below the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutcomeEnumeration {
    n: usize,
    m: usize,
    outcomes: u64,
}

impl OutcomeEnumeration {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        let too_big =
            || Error::Resource(format!("(2^{n})^{m} outcomes exceed the enumeration cap of {ENUMERATION_CAP}"));
        if n == 0 || m == 0 {
            return Err(Error::Usage(format!("enumeration needs n >= 1 and m >= 1, got n = {n}, m = {m}")));
        }
        let bits = n.checked_mul(m).ok_or_else(too_big)?;
        if bits >= 64 || (1u64 << bits) > ENUMERATION_CAP {
            return Err(too_big());
        }
        Ok(OutcomeEnumeration { n, m, outcomes: 1 << bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn outcomes(&self) -> u64 {
        self.outcomes
    }

    /// `counts[K]` = sum of `|min(H)|` over all tuples whose edges have total
    /// cardinality `K`. Each such tuple has probability `p^K (1-p)^{nm-K}`.
    pub fn min_size_counts(&self) -> Vec<u64> {
        let (n, m) = (self.n, self.m);
        let radix = 1u64 << n;
        let slots = n * m + 1;
        (0..radix)
            .into_par_iter()
            .map(|first| {
                let mut counts = vec![0u64; slots];
                let rest = self.outcomes / radix;
                let mut digits = vec![0u64; m];
                digits[0] = first;
                for code in 0..rest {
                    let mut c = code;
                    for d in digits.iter_mut().skip(1) {
                        *d = c % radix;
                        c /= radix;
                    }
                    let edges: Vec<EdgeSet> =
                        digits.iter().map(|&mask| EdgeSet::from_mask(n, mask).expect("mask fits universe")).collect();
                    let total: u32 = digits.iter().map(|d| d.count_ones()).sum();
                    let h = MultiHypergraph::new(n, edges).expect("shared universe");
                    counts[total as usize] += minimize_naive(&h).len() as u64;
                }
                counts
            })
            .reduce(
                || vec![0u64; slots],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    }
}

fn check_rational_probability(op: &'static str, p: &BigRational) -> Result<()> {
    if p < &BigRational::zero() || p > &BigRational::one() {
        return Err(Error::domain(op, format!("p must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Exact `E|min(B(n, m, p))|` by summing over all `(2^n)^m` outcome tuples.
pub fn enumerate_expected_min(n: usize, m: usize, p: &BigRational) -> Result<BigRational> {
    check_rational_probability("enumerate_expected_min", p)?;
    let space = OutcomeEnumeration::new(n, m)?;
    let counts = space.min_size_counts();
    let q = BigRational::one() - p;
    let total = n * m;
    let mut sum = BigRational::zero();
    for (k, &c) in counts.iter().enumerate() {
        if c > 0 {
            sum += BigRational::from_integer(BigInt::from(c)) * pow(p, k) * pow(&q, total - k);
        }
    }
    Ok(sum)
}

/// [`enumerate_expected_min`] for a floating-point `p`, which is converted
/// exactly to a rational first.
pub fn enumerate_expected_min_f64(n: usize, m: usize, p: f64) -> Result<f64> {
    let exact = enumerate_expected_min(n, m, &rational_from_f64("enumerate_expected_min", p)?)?;
    Ok(exact.to_f64().expect("expectation is finite"))
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// The exact rational value of a finite `f64`.
pub fn rational_from_f64(op: &'static str, x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(op, format!("{x} is not finite")))
}

/// `ln x` for a positive big integer, accurate to a few ulps.
fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits remain");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln x` of a rational; `-∞` for zero and NaN for negative values.
pub fn ln_big_rational(x: &BigRational) -> f64 {
    match x.numer().sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude()),
    }
}

pub fn big_rational_to_logreal(x: &BigRational) -> LogReal {
    match x.numer().sign() {
        Sign::NoSign => LogReal::ZERO,
        Sign::Plus => LogReal::from_ln(ln_big_rational(x)),
        Sign::Minus => -LogReal::from_ln(ln_big_rational(&-x)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `P[Y <= k]`
    AtMost,
    /// `P[Y >= k]`
    AtLeast,
}

fn tail_range(n: u64, k: u64, direction: Direction) -> std::ops::RangeInclusive<u64> {
    match direction {
        Direction::AtMost => 0..=k,
        Direction::AtLeast => k..=n,
    }
}

fn check_tail(op: &'static str, n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::domain(op, format!("need 0 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Largest `n` for which [`exact_binomial_tail`] also runs the rational path.
pub const RATIONAL_TAIL_MAX_N: u64 = 64;

/// Exact binomial tail of `Y ~ Bin(n, p)`, summed in the log domain.
///
/// For `n <= 64` the sum is also formed in exact rational arithmetic and the
/// rational value is returned; the two paths are compared in debug builds.
pub fn exact_binomial_tail(n: u64, p: f64, k: u64, direction: Direction) -> Result<LogReal> {
    const OP: &str = "exact_binomial_tail";
    check_tail(OP, n, k)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(OP, format!("p must be a probability, got {p}")));
    }
    let pmf = ln_binomial_pmf_row(n, p);
    let range = tail_range(n, k, direction);
    let ln_tail = log_sum_exp(&pmf[*range.start() as usize..=*range.end() as usize]);
    let log_path = LogReal::from_ln(ln_tail);
    if n > RATIONAL_TAIL_MAX_N {
        return Ok(log_path);
    }
    let exact = big_rational_to_logreal(&exact_binomial_tail_rational(n, &rational_from_f64(OP, p)?, k, direction)?);
    debug_assert!(
        exact.is_zero() && log_path.is_zero() || (exact.ln() - log_path.ln()).abs() < 1e-9,
        "tail paths disagree at n = {n}, p = {p}, k = {k}: {exact} vs {log_path}"
    );
    Ok(exact)
}

/// Exact binomial tail in rational arithmetic.
pub fn exact_binomial_tail_rational(n: u64, p: &BigRational, k: u64, direction: Direction) -> Result<BigRational> {
    const OP: &str = "exact_binomial_tail_rational";
    check_tail(OP, n, k)?;
    check_rational_probability(OP, p)?;
    // With p = a/d every term is C(n,j) a^j (d-a)^{n-j} / d^n.
    let a = p.numer().clone();
    let d = p.denom().clone();
    let b = &d - &a;
    let range = tail_range(n, k, direction);
    let lo = *range.start();
    let mut binom = binomial_big(n, lo);
    let mut a_pow = num_traits::pow(a.clone(), lo as usize);
    let mut b_pows = Vec::with_capacity((n - lo) as usize + 1);
    // b^{n-j} for decreasing exponents is cheapest built upward and read back.
    let mut acc = BigInt::one();
    for _ in 0..=(n - lo) {
        b_pows.push(acc.clone());
        acc *= &b;
    }
    let mut num = BigInt::zero();
    for j in range {
        num += &binom * &a_pow * &b_pows[(n - j) as usize];
        a_pow *= &a;
        binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    Ok(BigRational::new(num, num_traits::pow(d, n as usize)))
}

/// `C(n, k)` as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for j in 0..k {
        c = c * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    c
}

fn check_survival_inputs(op: &'static str, pa: &BigRational, pb: &BigRational, m: u32) -> Result<()> {
    check_rational_probability(op, pa)?;
    check_rational_probability(op, pb)?;
    if pb.is_zero() {
        return Err(Error::domain(op, "P[B] must be positive"));
    }
    if pa + pb > BigRational::one() {
        return Err(Error::domain(op, format!("P[A] + P[B] must not exceed 1, got {pa} + {pb}")));
    }
    if m == 0 {
        return Err(Error::domain(op, "m must be at least 1"));
    }
    Ok(())
}

/// `m` independent trials each yield `A`, `B`, or neither. Returns
/// `(P[no A | some B], P[no A | last trial is B])`, which satisfy `lhs <= rhs`.
///
/// Closed form: `lhs = ((1-pA)^m - (1-pA-pB)^m) / (1 - (1-pB)^m)` and
/// `rhs = (1-pA)^{m-1}`.
pub fn enumerate_conditional_survival(
    pa: &BigRational,
    pb: &BigRational,
    m: u32,
) -> Result<(BigRational, BigRational)> {
    check_survival_inputs("enumerate_conditional_survival", pa, pb, m)?;
    let one = BigRational::one();
    let m = m as usize;
    let no_a = &one - pa;
    let neither = &no_a - pb;
    let lhs = (pow(&no_a, m) - pow(&neither, m)) / (&one - pow(&(&one - pb), m));
    Ok((lhs, pow(&no_a, m - 1)))
}

/// Largest `m` accepted by [`conditional_survival_by_outcomes`].
pub const SURVIVAL_ENUMERATION_MAX_M: u32 = 12;

/// The same pair as [`enumerate_conditional_survival`], obtained by visiting
/// all `3^m` outcome sequences and summing their probabilities.
pub fn conditional_survival_by_outcomes(
    pa: &BigRational,
    pb: &BigRational,
    m: u32,
) -> Result<(BigRational, BigRational)> {
    const OP: &str = "conditional_survival_by_outcomes";
    check_survival_inputs(OP, pa, pb, m)?;
    if m > SURVIVAL_ENUMERATION_MAX_M {
        return Err(Error::Resource(format!("3^{m} sequences exceed the limit m <= {SURVIVAL_ENUMERATION_MAX_M}")));
    }
    let counts = SurvivalCounts::enumerate(m);
    let pc = BigRational::one() - pa - pb;
    let weight = |table: &[Vec<u64>]| {
        let mut s = BigRational::zero();
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c > 0 {
                    let rest = m as usize - a - b;
                    s += BigRational::from_integer(BigInt::from(c)) * pow(pa, a) * pow(pb, b) * pow(&pc, rest);
                }
            }
        }
        s
    };
    let lhs = weight(&counts.no_a_some_b) / weight(&counts.some_b);
    let rhs = weight(&counts.no_a_last_b) / weight(&counts.last_b);
    Ok((lhs, rhs))
}

/// Sequence counts indexed by `[#A][#B]` for the four events involved.
struct SurvivalCounts {
    some_b: Vec<Vec<u64>>,
    no_a_some_b: Vec<Vec<u64>>,
    last_b: Vec<Vec<u64>>,
    no_a_last_b: Vec<Vec<u64>>,
}

impl SurvivalCounts {
    fn enumerate(m: u32) -> Self {
        let size = m as usize + 1;
        let table = || vec![vec![0u64; size]; size];
        let mut out = SurvivalCounts { some_b: table(), no_a_some_b: table(), last_b: table(), no_a_last_b: table() };
        for code in 0..3u64.pow(m) {
            let (mut a, mut b, mut c, mut last) = (0usize, 0usize, code, 0u64);
            for _ in 0..m {
                last = c % 3;
                match last {
                    0 => a += 1,
                    1 => b += 1,
                    _ => {}
                }
                c /= 3;
            }
            if b > 0 {
                out.some_b[a][b] += 1;
                if a == 0 {
                    out.no_a_some_b[a][b] += 1;
                }
            }
            if last == 1 {
                out.last_b[a][b] += 1;
                if a == 0 {
                    out.no_a_last_b[a][b] += 1;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn two_by_two_half() {
        assert_eq!(enumerate_expected_min(2, 2, &r(1, 2)).unwrap(), r(18, 16));
    }

    #[test]
    fn single_vertex_is_always_one() {
        assert_eq!(enumerate_expected_min(1, 3, &r(3, 10)).unwrap(), r(1, 1));
    }

    #[test]
    fn cap_enforced() {
        assert!(OutcomeEnumeration::new(3, 7).is_ok());
        assert!(matches!(OutcomeEnumeration::new(4, 6), Err(Error::Resource(_))));
        assert!(matches!(OutcomeEnumeration::new(64, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn rational_tail_spot_values() {
        assert_eq!(exact_binomial_tail_rational(10, &r(1, 2), 3, Direction::AtMost).unwrap(), r(176, 1024));
        assert_eq!(exact_binomial_tail_rational(10, &r(1, 2), 2, Direction::AtMost).unwrap(), r(56, 1024));
        assert_eq!(exact_binomial_tail_rational(7, &r(1, 3), 0, Direction::AtLeast).unwrap(), r(1, 1));
        assert_eq!(exact_binomial_tail_rational(7, &r(1, 3), 7, Direction::AtMost).unwrap(), r(1, 1));
    }

    #[test]
    fn log_tail_matches_rational() {
        let v = exact_binomial_tail(10, 0.5, 3, Direction::AtMost).unwrap();
        assert!((v.to_f64() - 176.0 / 1024.0).abs() < 1e-15);
        let v = exact_binomial_tail(100, 0.5, 100, Direction::AtMost).unwrap();
        assert!(v.ln().abs() < 1e-12);
    }

    #[test]
    fn big_ln() {
        let x = BigRational::new(BigInt::from(10).pow(400), BigInt::from(3));
        assert!((ln_big_rational(&x) - (400.0 * 10f64.ln() - 3f64.ln())).abs() < 1e-12);
        assert_eq!(ln_big_rational(&BigRational::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn survival_routes_agree() {
        for m in 1..=6 {
            for (pa, pb) in [(r(1, 5), r(3, 10)), (r(0, 1), r(1, 2)), (r(1, 2), r(1, 2))] {
                let closed = enumerate_conditional_survival(&pa, &pb, m).unwrap();
                assert_eq!(closed, conditional_survival_by_outcomes(&pa, &pb, m).unwrap());
                assert!(closed.0 <= closed.1);
            }
        }
        let (l, rr) = enumerate_conditional_survival(&r(1, 5), &r(3, 10), 1).unwrap();
        assert_eq!((l, rr), (r(1, 1), r(1, 1)));
        assert!(enumerate_conditional_survival(&r(1, 5), &r(0, 1), 3).is_err());
    }
}
