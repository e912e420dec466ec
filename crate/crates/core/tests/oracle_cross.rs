//! The brute-force oracles against each other and against the closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use hypermin_core::bounds::{expected_min_exact, EdgeCount};
use hypermin_core::oracle::{
    conditional_survival_by_outcomes, enumerate_conditional_survival, enumerate_expected_min,
    enumerate_expected_min_f64, exact_binomial_tail, exact_binomial_tail_rational, ln_big_rational, Direction,
    OutcomeEnumeration,
};
use hypermin_core::Error;

fn r(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_expected_min(2, 2, &r(1, 2)).unwrap(), r(18, 16));
    assert_eq!(enumerate_expected_min(1, 3, &r(3, 10)).unwrap(), r(1, 1));
    let closed = expected_min_exact(3, 0.25, EdgeCount::new(2).unwrap()).unwrap().to_f64();
    assert!((enumerate_expected_min_f64(3, 2, 0.25).unwrap() - closed).abs() < 1e-12);
}

/// Every instance with `nm <= 16` for three exactly representable p.
#[test]
fn enumeration_matches_closed_form() {
    for n in 1..=8usize {
        for m in 1..=16 / n {
            for (num, den) in [(1, 4), (1, 2), (3, 4)] {
                let exact = enumerate_expected_min(n, m, &r(num, den)).unwrap().to_f64().unwrap();
                let closed = expected_min_exact(n as u64, num as f64 / den as f64, EdgeCount::new(m as u64).unwrap())
                    .unwrap()
                    .to_f64();
                assert!((exact - closed).abs() <= 1e-12 * exact.max(1.0), "n={n} m={m} p={num}/{den}");
            }
        }
    }
}

#[test]
fn enumeration_respects_the_cap() {
    assert!(matches!(enumerate_expected_min(5, 5, &r(1, 2)), Err(Error::Resource(_))));
    assert_eq!(OutcomeEnumeration::new(3, 3).unwrap().outcomes(), 512);
    assert!(enumerate_expected_min(2, 2, &r(3, 2)).is_err());
}

#[test]
fn tail_examples() {
    for n in [1u64, 10, 64, 65, 300] {
        assert!(exact_binomial_tail(n, 0.37, n, Direction::AtMost).unwrap().ln().abs() < 1e-12);
        assert!(exact_binomial_tail(n, 0.37, 0, Direction::AtLeast).unwrap().ln().abs() < 1e-12);
    }
    assert_eq!(exact_binomial_tail_rational(10, &r(1, 2), 3, Direction::AtMost).unwrap(), r(176, 1024));
    assert!((exact_binomial_tail(10, 0.5, 3, Direction::AtMost).unwrap().to_f64() - 176.0 / 1024.0).abs() < 1e-16);
    assert!(exact_binomial_tail(10, 0.5, 11, Direction::AtMost).is_err());
}

#[test]
fn tail_paths_agree_at_scale() {
    let (n, k) = (2000u64, 1200u64);
    for dir in [Direction::AtMost, Direction::AtLeast] {
        let log_path = exact_binomial_tail(n, 0.7, k, dir).unwrap().ln();
        let rational = ln_big_rational(&exact_binomial_tail_rational(n, &r(7, 10), k, dir).unwrap());
        assert!((log_path - rational).abs() <= 1e-10 * rational.abs().max(1.0), "{dir:?}: {log_path} vs {rational}");
    }
}

#[test]
fn tail_is_monotone_in_k() {
    for (n, p) in [(30u64, 0.2), (200, 0.5), (1000, 0.9)] {
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=n {
            let v = exact_binomial_tail(n, p, k, Direction::AtMost).unwrap().ln();
            assert!(v >= prev - 1e-12, "n={n} p={p} k={k}");
            prev = v;
        }
    }
}

#[test]
fn survival_examples() {
    for m in 1..=12 {
        assert_eq!(enumerate_conditional_survival(&r(0, 1), &r(1, 3), m).unwrap(), (r(1, 1), r(1, 1)));
    }
    assert_eq!(enumerate_conditional_survival(&r(2, 5), &r(1, 5), 1).unwrap(), (r(1, 1), r(1, 1)));
    let (lhs, rhs) = enumerate_conditional_survival(&r(2, 10), &r(3, 10), 4).unwrap();
    assert!(lhs <= rhs);
    assert!(matches!(enumerate_conditional_survival(&r(1, 2), &r(0, 1), 3), Err(Error::Domain { .. })));
    assert!(enumerate_conditional_survival(&r(3, 4), &r(1, 2), 3).is_err());
}

#[test]
fn survival_routes_agree_on_grid() {
    for a in (0..=20i64).step_by(2) {
        for b in (1..=20 - a).step_by(3) {
            for m in 1..=8 {
                let closed = enumerate_conditional_survival(&r(a, 20), &r(b, 20), m).unwrap();
                let counted = conditional_survival_by_outcomes(&r(a, 20), &r(b, 20), m).unwrap();
                assert_eq!(closed, counted, "pA={a}/20 pB={b}/20 m={m}");
            }
        }
    }
    let closed = enumerate_conditional_survival(&r(3, 20), &r(7, 20), 12).unwrap();
    assert_eq!(closed, conditional_survival_by_outcomes(&r(3, 20), &r(7, 20), 12).unwrap());
    assert!(conditional_survival_by_outcomes(&r(1, 4), &r(1, 4), 13).is_err());
}

#[test]
fn survival_inequality_on_full_grid() {
    for a in 0..=20i64 {
        for b in 1..=20 - a {
            for m in 1..=12 {
                let (lhs, rhs) = enumerate_conditional_survival(&r(a, 20), &r(b, 20), m).unwrap();
                assert!(lhs <= rhs, "pA={a}/20 pB={b}/20 m={m}");
            }
        }
    }
}
