use num_bigint::BigInt;
use proptest::prelude::*;
use qident::qgauss::{classical_trinomial, qbinom, qbinom_modified, qbinom_modified_branches, qtrinom};
use qident::qlaurent::{series_inverse, truncated_mul};
use qident::{Error, Exponent, QLaurent, QSeries};

fn poly() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-12i64..12, -20i64..20), 0..6).prop_map(|ts| {
        QLaurent::from_terms(ts.into_iter().map(|(e, c)| (Exponent::from_quarters(e), BigInt::from(c))))
    })
}

fn binomial(n: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, j| acc * (n - j) / (j + 1))
}

proptest! {
    #[test]
    fn ring_axioms(x in poly(), y in poly(), z in poly()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(&x * &QLaurent::one(), x.clone());
    }

    #[test]
    fn exact_division_inverts_product(x in poly(), y in poly()) {
        let prod = &x * &y;
        match prod.div_exact(&y) {
            Ok(qt) => prop_assert_eq!(qt, x),
            Err(e) => {
                prop_assert!(y.is_zero());
                prop_assert_eq!(e, Error::DivisionByZero);
            }
        }
    }

    #[test]
    fn shift_is_multiplication_by_monomial(x in poly(), e in -20i64..20) {
        let e = Exponent::from_quarters(e);
        prop_assert_eq!(x.shift(e), &x * &QLaurent::q_pow(e));
    }

    #[test]
    fn truncated_product_matches_full(x in poly(), y in poly(), c in -8i64..16) {
        let c = Exponent::from_quarters(c);
        prop_assert_eq!(truncated_mul(&x, &y, c), (&x * &y).truncate(c));
    }

    #[test]
    fn series_inverse_is_inverse(tail in prop::collection::vec(-5i64..5, 0..8), n in 0i64..15) {
        let mut coeffs = vec![1i64];
        coeffs.extend(tail);
        let cutoff = Exponent::from_int(n);
        let x = QSeries::new(QLaurent::from_int_coeffs(&coeffs), cutoff);
        let inv = series_inverse(&x).unwrap();
        prop_assert_eq!(x.mul(&inv), QSeries::one(cutoff));
    }

    #[test]
    fn binomial_symmetric_and_specializes(n in 0i64..12, m in 0i64..12) {
        let b = qbinom(n, m);
        prop_assert_eq!(&b, &qbinom(m, n));
        prop_assert_eq!(b.eval_at_one(), binomial(n + m, n));
        prop_assert!(b.is_nonnegative());
        prop_assert_eq!(b.max_exponent(), Some(Exponent::from_int(n * m)));
    }

    #[test]
    fn modified_binomial_branches_agree(n in -12i64..12, m in -12i64..12) {
        prop_assert_eq!(qbinom_modified(n, m), qbinom_modified_branches(n, m));
    }

    #[test]
    fn trinomial_symmetric_and_specializes(l in 0i64..14, a in -16i64..16) {
        let t = qtrinom(l, a, 0);
        prop_assert_eq!(&t, &qtrinom(l, -a, 0));
        prop_assert_eq!(t.eval_at_one(), classical_trinomial(l, a));
        prop_assert!(t.is_nonnegative());
    }
}
