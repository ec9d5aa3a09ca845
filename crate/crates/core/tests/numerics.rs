use proptest::prelude::*;
use treemax_core::numerics::comparison_slack;
use treemax_core::{Integer, LogScalar};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_round_trip(e in -5000.0f64..5000.0, k in 2u32..6) {
        let x = LogScalar::from_exponent(e, k);
        let back = x.exponent_f64().unwrap();
        prop_assert!((back - e).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn decimal_round_trip(mantissa in 1.0f64..10.0, exp in -300i32..300) {
        let text = format!("{mantissa}e{exp}");
        let x = LogScalar::parse(&text, 2).unwrap();
        let y = LogScalar::parse(&x.to_sci(35), 2).unwrap();
        prop_assert!(x.rel_diff(&y) < 1e-33);
    }

    #[test]
    fn sum_ignores_order(values in prop::collection::vec(0u64..1_000_000, 1..40), shift in 0usize..40) {
        let terms: Vec<LogScalar> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| LogScalar::from_u64(v, 3).pow(1.0 + i as f64 / 7.0))
            .collect();
        let mut rotated = terms.clone();
        rotated.rotate_left(shift % terms.len());
        rotated.reverse();
        let a = LogScalar::sum(&terms, 3).unwrap();
        let b = LogScalar::sum(&rotated, 3).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn products_match_exponent_sums(a in -6400i32..6400, b in -6400i32..6400) {
        // dyadic exponents add exactly in f64
        let (a, b) = (f64::from(a) / 8.0, f64::from(b) / 8.0);
        let x = LogScalar::from_exponent(a, 2);
        let y = LogScalar::from_exponent(b, 2);
        let z = &x * &y;
        prop_assert!(z.approx_eq(&LogScalar::from_exponent(a + b, 2), 1e-25));
        let w = &z / &y;
        prop_assert!(w.approx_eq(&x, 1e-25));
    }
}

#[test]
fn huge_integers_are_exact_enough() {
    // 2^4000 + 1 does not fit an f64 and must survive the conversion
    let big = Integer::from(Integer::u_pow_u(2, 4000)) + 1u32;
    let x = LogScalar::from_integer(&big, 2).unwrap();
    assert!((x.exponent_f64().unwrap() - 4000.0).abs() < 1e-12);
    assert!(x.to_f64().is_infinite());
}

#[test]
fn subtraction_below_zero_is_an_error() {
    let one = LogScalar::one(2);
    let two = LogScalar::from_u64(2, 2);
    assert!(one.try_sub(&two).is_err());
    assert!(two.try_sub(&one).unwrap().approx_eq(&one, 0.0));
}

#[test]
fn mixed_bases_are_rejected() {
    assert!(LogScalar::one(2).try_add(&LogScalar::one(3)).is_err());
}

#[test]
fn slack_sits_below_acceptance_tolerances() {
    assert!(comparison_slack() < 1e-20);
}
