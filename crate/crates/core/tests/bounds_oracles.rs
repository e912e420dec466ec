//! Analytic bounds checked against independently computed exact values.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use hypermin_core::bounds::{
    argmax_m, binary_entropy, binom_coeff_bounds, chernoff_integral, chernoff_sharp, cramer_rate,
    expected_distinct_range, expected_min_exact, expected_min_sandwich, kl_divergence, klar_ratio_bound,
    poly_prob_bounds, weighting_factor, weighting_factor_bounds, DerivedParams, EdgeCount, KlBase, Tail,
};
use hypermin_core::oracle::{exact_binomial_tail, exact_binomial_tail_rational, Direction};
use hypermin_core::LogReal;

const SLACK: f64 = 1e-9;

fn m(v: u64) -> EdgeCount {
    EdgeCount::new(v).unwrap()
}

fn grid(steps: u32) -> impl Iterator<Item = f64> {
    (0..=steps).map(move |j| j as f64 / steps as f64)
}

/// `C(n, k)` as a product of big integers, independent of the library.
fn choose(n: u64, k: u64) -> BigUint {
    let num: BigUint = (n - k + 1..=n).map(BigUint::from).product();
    let den: BigUint = (1..=k).map(BigUint::from).product();
    num / den
}

fn ln_big(x: &BigUint) -> f64 {
    let shift = x.bits().saturating_sub(60);
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[test]
fn entropy_examples() {
    assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    for x in grid(50) {
        let h = binary_entropy(x).unwrap();
        assert!((0.0..=1.0).contains(&h));
        assert!((h - binary_entropy(1.0 - x).unwrap()).abs() < 1e-15);
    }
    assert!(binary_entropy(1.5).is_err());
    assert!(binary_entropy(-0.1).is_err());
}

#[test]
fn divergence_examples() {
    for p in [0.1, 0.5, 0.93] {
        assert_eq!(kl_divergence(p, p, KlBase::Two).unwrap(), 0.0);
        for n in [1u64, 10, 100] {
            let lhs = 2f64.powf(-kl_divergence(0.0, p, KlBase::Two).unwrap() * n as f64);
            assert!((lhs / (1.0 - p).powi(n as i32) - 1.0).abs() < 1e-12);
        }
    }
    for x in grid(20) {
        for y in grid(20).filter(|y| *y > 0.0 && *y < 1.0) {
            let d2 = kl_divergence(x, y, KlBase::Two).unwrap();
            let de = kl_divergence(x, y, KlBase::E).unwrap();
            assert!((de - std::f64::consts::LN_2 * d2).abs() <= 1e-14 * de.max(1.0));
            assert!((d2 - kl_divergence(1.0 - x, 1.0 - y, KlBase::Two).unwrap()).abs() <= 1e-12 * d2.max(1.0));
            assert!(d2 >= 0.0 && (d2 == 0.0) == (x == y));
        }
    }
    assert_eq!(kl_divergence(0.3, 0.0, KlBase::Two).unwrap(), f64::INFINITY);
    assert_eq!(kl_divergence(0.3, 1.0, KlBase::E).unwrap(), f64::INFINITY);
    assert_eq!(kl_divergence(1.0, 1.0, KlBase::E).unwrap(), 0.0);
}

#[test]
fn divergence_factor_is_monotone_below_p() {
    for p in [0.1, 0.3, 0.5, 0.8] {
        let mut prev = 0.0;
        for j in 0..=400 {
            let x = p * j as f64 / 400.0;
            let v = 2f64.powf(-kl_divergence(x, p, KlBase::Two).unwrap());
            assert!(v >= prev * (1.0 - 1e-15), "p = {p}, x = {x}");
            prev = v;
        }
    }
}

#[test]
fn binomial_coefficient_bounds() {
    for (n, k) in [(10u64, 5u64), (100, 30), (1, 1), (64, 1), (500, 250), (2000, 7)] {
        let x = k as f64 / n as f64;
        if !(x > 0.0 && x < 1.0) {
            continue;
        }
        let (lo, hi) = binom_coeff_bounds(n, x).unwrap();
        let exact = LogReal::from_ln(ln_big(&choose(n, k)));
        assert!(lo.le_within(exact, SLACK) && exact.le_within(hi, SLACK), "C({n},{k})");
        assert!(((hi / lo).to_f64() - (8.0 / std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }
    assert_eq!(choose(10, 5), BigUint::from(252u32));
    assert!(binom_coeff_bounds(10, 0.33).is_err());
}

#[test]
fn power_bounds_bracket() {
    for n in [0u64, 1, 2, 7, 50, 1000] {
        for x in grid(40) {
            let b = poly_prob_bounds(n, x).unwrap();
            let power = (1.0 - x).powi(n as i32);
            let tol = 1e-14;
            assert!(b.power_lower <= power + tol && power <= b.power_upper + tol, "n = {n}, x = {x}");
            assert!(b.complement_lower <= 1.0 - power + tol && 1.0 - power <= b.complement_upper + tol);
        }
    }
    let b = poly_prob_bounds(50, 0.01).unwrap();
    assert!((b.power_lower - (-0.5f64).exp() * 0.995).abs() < 1e-15);
    assert!(b.power_lower <= 0.99f64.powi(50) && 0.99f64.powi(50) <= b.power_upper);
}

#[test]
fn chernoff_spot_values() {
    let exact = exact_binomial_tail(100, 0.5, 30, Direction::AtMost).unwrap();
    let b = chernoff_sharp(100, 0.5, 0.3, Tail::Lower).unwrap();
    assert!(b.lower <= exact && exact <= b.upper);

    let exact = LogReal::from_f64((1 + 10 + 45) as f64 / 1024.0);
    let b = chernoff_integral(10, 0.5, 0.2, Tail::Lower).unwrap();
    assert!(b.lower <= exact && exact <= b.upper);
    assert_eq!(
        exact_binomial_tail_rational(10, &BigRational::new(1.into(), 2.into()), 2, Direction::AtMost).unwrap(),
        BigRational::new(56.into(), 1024.into())
    );
    assert!(chernoff_integral(4, 0.5, 0.5, Tail::Lower).is_err());
    assert!(chernoff_integral(10, 0.5, 0.25, Tail::Lower).is_err());
}

#[test]
fn chernoff_complement_symmetry_and_width() {
    for (n, p, x) in [(100u64, 0.3, 0.7), (57, 0.5, 0.9), (1000, 0.2, 0.25)] {
        let up = chernoff_sharp(n, p, x, Tail::Upper).unwrap();
        let low = chernoff_sharp(n, 1.0 - p, 1.0 - x, Tail::Lower).unwrap();
        assert!((up.lower.ln() - low.lower.ln()).abs() < 1e-9 && (up.upper.ln() - low.upper.ln()).abs() < 1e-9);
    }
    let widths: Vec<f64> = [100u64, 1000, 10_000]
        .iter()
        .map(|&n| {
            (chernoff_sharp(n, 0.7, 0.4, Tail::Lower).unwrap()).upper.ln()
                - chernoff_sharp(n, 0.7, 0.4, Tail::Lower).unwrap().lower.ln()
        })
        .collect();
    assert!(widths.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-9));
}

#[test]
fn integral_constants_nest_inside_general() {
    for n in [10u64, 40, 300] {
        for p in [0.2, 0.5, 0.75] {
            for k in 1..n {
                let x = k as f64 / n as f64;
                let tail = if x < p {
                    Tail::Lower
                } else if x > p {
                    Tail::Upper
                } else {
                    continue;
                };
                let (Ok(general), Ok(integral)) = (chernoff_sharp(n, p, x, tail), chernoff_integral(n, p, x, tail))
                else {
                    continue;
                };
                assert!(general.lower.le_within(integral.lower, SLACK), "n={n} p={p} k={k}");
                assert!(integral.upper.le_within(general.upper, SLACK), "n={n} p={p} k={k}");
            }
        }
    }
}

#[test]
fn klar_examples() {
    let (one, bound) = klar_ratio_bound(10, 0.5, 3).unwrap();
    assert_eq!(one, 1.0);
    assert!((bound - 1.6).abs() < 1e-12);
    assert!(176.0 / 120.0 <= bound);
    let (_, b0) = klar_ratio_bound(10, 0.5, 0).unwrap();
    assert!(b0 >= 1.0);
    assert!(klar_ratio_bound(10, 0.5, 6).is_err());
}

/// The Klar bound at `k = xn` increases with `n` toward `p(1-x)/(p-x)`.
#[test]
fn klar_bound_converges_from_below() {
    for (x, p) in [(0.2, 0.5), (0.1, 0.3), (0.5, 0.7)] {
        let limit = p * (1.0 - x) / (p - x);
        let mut prev = 0.0;
        for n in (10..=10_000u64).step_by(10) {
            let (_, f) = klar_ratio_bound(n, p, (x * n as f64).round() as u64).unwrap();
            assert!(f >= prev && f <= limit, "x = {x}, p = {p}, n = {n}");
            prev = f;
        }
        assert!(limit - prev < 1e-3);
    }
}

#[test]
fn cramer_residual_is_order_one_over_n() {
    let (p, x) = (0.3, 0.6);
    let residuals: Vec<f64> = [100u64, 200, 500, 1000, 2000, 5000]
        .iter()
        .map(|&n| {
            let k = (x * n as f64).round() as u64;
            let ln_tail = exact_binomial_tail(n, p, k, Direction::AtLeast).unwrap().ln();
            n as f64 * (ln_tail / n as f64 - cramer_rate(n, p, x).unwrap())
        })
        .collect();
    // n·residual is the log of the tail prefactor, which the sharp bounds pin down.
    let b = chernoff_integral(100, p, x, Tail::Upper).unwrap().constants;
    for r in &residuals {
        assert!(b.lower.ln() <= *r && *r <= b.upper.ln(), "{residuals:?}");
    }
    // The fitted constant settles as n grows.
    let c = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    assert!(c < 2.0, "{residuals:?}");
    assert!((residuals[5] - residuals[4]).abs() < 0.01, "{residuals:?}");

    let d = kl_divergence(x, p, KlBase::E).unwrap();
    assert!((cramer_rate(10_000_000, p, x).unwrap() + d).abs() < 1e-5);
    assert!(cramer_rate(100, 0.5, 0.5).is_err());
    assert!(cramer_rate(100, 0.5, 0.4).is_err());
}

#[test]
fn weighting_factor_examples() {
    for p in [0.1, 0.5, 0.8] {
        for mm in [1u64, 3, 1000] {
            assert_eq!(weighting_factor(9, p, 0, m(mm)), LogReal::ONE);
            let top = weighting_factor(9, p, 9, m(mm));
            assert!((top.ln() - 9.0 * mm as f64 * p.ln()).abs() < 1e-9);
        }
    }
    let (n, p, mm) = (30u64, 0.5, m(1 << 15));
    let i_star = DerivedParams::new(n, p, mm).unwrap().i_star.round() as u64;
    assert_eq!(i_star, 15);
    for i in [i_star - 3, i_star + 3] {
        let direct = (1.0 - 0.5f64.powi((n - i) as i32) * (1.0 - 0.5f64.powi(i as i32))).powi(1 << 15);
        let w = weighting_factor(n, p, i, mm);
        assert!((w.to_f64() - direct).abs() <= 1e-12 * direct.max(1e-300));
        let (lo, hi) = weighting_factor_bounds(n, p, i, mm).unwrap();
        assert!(lo.le_within(w, SLACK) && w.le_within(hi, SLACK));
    }
}

#[test]
fn weighting_factor_is_monotone() {
    for p in [0.2, 0.5, 0.9] {
        let n = 24u64;
        for e in 0..30 {
            let mm = EdgeCount::from_ln(e as f64).unwrap();
            let mm_next = EdgeCount::from_ln(e as f64 + 0.5).unwrap();
            for i in 0..=n {
                let w = weighting_factor(n, p, i, mm);
                if i < n {
                    assert!(weighting_factor(n, p, i + 1, mm) <= w);
                }
                assert!(weighting_factor(n, p, i, mm_next) <= w);
            }
        }
    }
}

#[test]
fn sandwich_examples() {
    for p in [0.0, 1.0] {
        let s = expected_min_sandwich(7, p, m(20)).unwrap();
        assert_eq!((s.lower, s.upper_shifted, s.upper_scaled), (LogReal::ONE, LogReal::ONE, LogReal::ONE));
    }
    let s = expected_min_sandwich(2, 0.5, m(2)).unwrap();
    assert!(s.lower.to_f64() <= 1.125 && 1.125 <= s.upper_shifted.to_f64());
    assert!((expected_min_exact(1, 0.37, m(1)).unwrap().to_f64() - 1.0).abs() < 1e-15);
    for n in 1..=12u64 {
        for p in [0.1, 0.25, 0.5, 0.75, 0.9] {
            for mm in 1..=64u64 {
                let s = expected_min_sandwich(n, p, m(mm)).unwrap();
                let exact = expected_min_exact(n, p, m(mm)).unwrap();
                assert!(s.lower.le_within(exact, SLACK) && exact.le_within(s.upper(), SLACK), "n={n} p={p} m={mm}");
            }
        }
    }
}

#[test]
fn distinct_examples() {
    for p in [0.1, 0.5, 0.9] {
        let r = expected_distinct_range(10, p, m(1), 0, 10).unwrap();
        assert!((r.exact.to_f64() - 1.0).abs() < 1e-12);
    }
    for (l, u) in [(0u64, 20u64), (3, 7), (11, 11)] {
        let r = expected_distinct_range(20, 0.5, m(9), l, u).unwrap();
        assert!((r.max_mass.ln() + 20.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }
    let (n, p, mm) = (20u64, 0.3, 1000u64);
    let r = expected_distinct_range(n, p, m(mm), 0, 8).unwrap();
    let direct: f64 = (0..=8u64)
        .map(|i| {
            let s = p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
            choose(n, i).to_f64().unwrap() * (1.0 - (1.0 - s).powi(mm as i32))
        })
        .sum();
    assert!((r.exact.to_f64() / direct - 1.0).abs() < 1e-10);
    assert!(r.lower <= r.exact && r.exact <= r.upper);
    assert!(expected_distinct_range(5, 0.5, m(3), 4, 2).is_err());
    assert!(expected_distinct_range(5, 0.5, m(3), 0, 6).is_err());
}

#[test]
fn distinct_sandwich_and_ordering_on_grid() {
    for n in [1u64, 5, 12, 40] {
        for p in [0.15, 0.5, 0.85] {
            for e in 0..=24 {
                let mm = EdgeCount::from_ln(e as f64 * 0.7).unwrap();
                for (l, u) in [(0, n), (0, n / 2), (n / 3, n)] {
                    let r = expected_distinct_range(n, p, mm, l, u).unwrap();
                    assert!(
                        r.lower.le_within(r.exact, SLACK) && r.exact.le_within(r.upper, SLACK),
                        "n={n} p={p} e={e}"
                    );
                }
                let exact_min = expected_min_exact(n, p, mm).unwrap();
                let distinct = expected_distinct_range(n, p, mm, 0, n).unwrap().exact;
                assert!(exact_min.le_within(distinct, SLACK) && distinct.le_within(mm.value(), SLACK));
            }
        }
    }
}

#[test]
fn maximum_location() {
    let (n, p) = (200u64, 0.6);
    let ln_top = 1.5 * n as f64 * -(1.0f64 - p).ln();
    let (best, _) = (0..200)
        .map(|j| EdgeCount::from_ln(ln_top * j as f64 / 199.0).unwrap())
        .map(|mm| (mm, expected_min_exact(n, p, mm).unwrap()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let alpha = DerivedParams::new(n, p, best).unwrap().alpha;
    assert!((alpha - 1.0 / 1.6).abs() <= 0.05);
    let (m_star, _) = argmax_m(n, p);
    let alpha_star = DerivedParams::new(n, p, EdgeCount::from_ln(m_star.ln()).unwrap()).unwrap().alpha;
    assert!((alpha_star - 1.0 / 1.6).abs() < 1e-12);
    assert_eq!(argmax_m(n, 0.0).1, LogReal::ONE);
}
