use holo_core::scalars::{
    decide_zero, euler_phi, kth_roots, parse_scalar, Cyclotomic, Radical, Rational, Scalar,
    ZeroTest,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn cyclotomic(order: u32) -> impl Strategy<Value = Cyclotomic> {
    let n = euler_phi(order) as usize;
    prop::collection::vec((-6i64..=6, 1i64..=4), n)
        .prop_map(move |cs| Cyclotomic::from_coeffs(order, cs.into_iter().map(|(a, b)| rat(a, b)).collect()))
}

fn any_order() -> impl Strategy<Value = u32> {
    prop_oneof![Just(8u32), Just(16), Just(24)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn division_undoes_multiplication(
        (a, b) in any_order().prop_flat_map(|m| (cyclotomic(m), any_order().prop_flat_map(cyclotomic)))
    ) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(&prod * &b.inv().unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn ring_laws(a in cyclotomic(16), b in cyclotomic(24), c in cyclotomic(8)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn roots_raise_back_to_radicand(v in cyclotomic(8), k in 1u32..=4) {
        prop_assume!(!v.is_zero());
        let roots = kth_roots(&v, k);
        prop_assert_eq!(roots.len(), k as usize);
        for r in &roots {
            prop_assert!(r.pow(k).equals(&Scalar::from(v.clone())).unwrap());
        }
    }

    #[test]
    fn perfect_powers_stay_cyclotomic(w in cyclotomic(8), k in 2u32..=4) {
        prop_assume!(!w.is_zero());
        let v = w.pow(k as i64).unwrap();
        let roots = kth_roots(&v, k);
        prop_assert!(roots.iter().all(|r| r.radical().is_none()));
        prop_assert!(roots.iter().any(|r| r.equals(&Scalar::from(w.clone())).unwrap()));
    }

    #[test]
    fn non_units_are_not_powers_of_i(x in cyclotomic(8), r in 0i64..4) {
        let n = x.norm();
        prop_assume!(!x.is_zero() && n != rat(1, 1));
        let s = Scalar::i_pow(r) * Scalar::from(x);
        prop_assert_eq!(s.is_power_of_i().unwrap(), None);
    }

    #[test]
    fn zero_test_is_sound_on_split_radicals(w in cyclotomic(8), p in prop_oneof![Just(2u32), Just(3)]) {
        // y^p = w^p is reducible; exactly one of y - w zeta_p^m vanishes at the principal root
        prop_assume!(!w.is_zero());
        let v = w.pow(p as i64).unwrap();
        let rad = Arc::new(Radical::new(p, v.clone(), 0));
        let y = Scalar::generator(rad);
        let (vr, vi) = v.to_f64();
        let modulus = vr.hypot(vi).powf(1.0 / p as f64);
        let arg = vi.atan2(vr) / p as f64;
        let principal = (modulus * arg.cos(), modulus * arg.sin());
        for m in 0..p {
            let c = &w * &Cyclotomic::zeta_power(p, m as i64);
            let (cr, ci) = c.to_f64();
            let analytic_zero = (cr - principal.0).hypot(ci - principal.1) < 1e-9 * (1.0 + modulus);
            let s = &y - &Scalar::from(c);
            let verdict = decide_zero(&s, 1024);
            if analytic_zero {
                prop_assert_ne!(verdict, ZeroTest::NonZero);
            } else {
                prop_assert_ne!(verdict, ZeroTest::Zero);
            }
        }
    }
}

#[test]
fn literal_fixtures() {
    let a = parse_scalar("a").unwrap();
    assert!((&a * &a).equals(&Scalar::i()).unwrap());
    let s = parse_scalar("(a - a^3)^2").unwrap();
    assert_eq!(s.as_rational(), Some(rat(2, 1)));
    assert_eq!(
        parse_scalar("(a - a^3)^2/2").unwrap().is_power_of_i().unwrap(),
        Some(0)
    );
    assert_eq!(parse_scalar("a").unwrap().is_power_of_i().unwrap(), None);
}
