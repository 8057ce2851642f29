use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use qcong_core::cyclotomic::cyclotomic;
use qcong_core::polycore::{LaurentPoly, Poly, Rational, Valuation, KARATSUBA_THRESHOLD};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-40i64..=40, 0..max_len).prop_map(|c| Poly::from_i64s(&c))
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

fn monic(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-9i64..=9, 1..max_len).prop_map(|mut c| {
        c.push(1);
        Poly::from_i64s(&c)
    })
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (poly(12), -15i64..15).prop_map(|(p, o)| LaurentPoly::new(p, o))
}

fn point() -> impl Strategy<Value = Rational> {
    (-7i64..=7, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn division_reconstructs(a in poly(60), m in monic(12)) {
        let (q, r) = a.div_rem_monic(&m).unwrap();
        prop_assert_eq!(&(&q * &m) + &r, a);
        match (r.degree(), m.degree()) {
            (Some(dr), Some(dm)) => prop_assert!(dr < dm),
            (None, _) => {}
            (Some(_), None) => prop_assert!(false, "remainder against a constant divisor"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_division_undoes_multiplication(a in poly(40), m in monic(10)) {
        prop_assert_eq!((&a * &m).div_exact_monic(&m).unwrap(), a);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in poly(50), b in poly(50), c in poly(20)) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn karatsuba_matches_schoolbook(a in poly(120), b in poly(120), th in 2usize..40) {
        prop_assert_eq!(a.mul_with_threshold(&b, th), a.mul_schoolbook(&b));
    }

    #[test]
    fn valuation_is_additive(a in nonzero_poly(25), b in nonzero_poly(25), d in 2u64..13, k in 0u32..4) {
        let phi = cyclotomic(d);
        let va = a.valuation(&phi).unwrap().finite().unwrap();
        let vb = b.valuation(&phi).unwrap().finite().unwrap();
        let prod = &(&a * &b) * &phi.pow(k);
        prop_assert_eq!(prod.valuation(&phi).unwrap(), Valuation::Finite(va + vb + u64::from(k)));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in poly(20), b in poly(20), x in point()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        prop_assert_eq!((&a - &b).eval(&x), a.eval(&x) - b.eval(&x));
    }

    #[test]
    fn one_minus_pow_in_place(a in poly(30), m in 1usize..20) {
        let mut b = a.clone();
        b.mul_one_minus_pow_assign(m);
        prop_assert_eq!(&b, &(&a * &Poly::one_minus_pow(m)));
        prop_assert_eq!(b.div_one_minus_pow_exact(m).unwrap(), a);
    }

    #[test]
    fn laurent_arithmetic(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        let x = Rational::new(3.into(), 2.into());
        prop_assert_eq!((&a * &b).eval(&x).unwrap(), a.eval(&x).unwrap() * b.eval(&x).unwrap());
        if !a.is_zero() {
            prop_assert!(!a.body().coeff(0).is_zero());
        }
    }

    #[test]
    fn laurent_valuation_ignores_the_offset(p in nonzero_poly(20), o in -10i64..10, d in 2u64..10) {
        let phi = cyclotomic(d);
        let direct = p.valuation(&phi).unwrap();
        prop_assert_eq!(LaurentPoly::new(p, o).valuation(&phi).unwrap(), direct);
    }
}

#[test]
fn karatsuba_matches_schoolbook_at_degree_2000() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut big = |len: usize| {
        Poly::from_coeffs(
            (0..len)
                .map(|_| BigInt::from(rng.gen_range(-1_000_000_000i64..=1_000_000_000)) << rng.gen_range(0..64))
                .collect(),
        )
    };
    let a = big(2001);
    let b = big(1500);
    assert!(KARATSUBA_THRESHOLD < 2000);
    let fast = a.mul_poly(&b);
    assert_eq!(fast, a.mul_schoolbook(&b));
    assert_eq!(fast.degree(), Some(3499));
}

#[test]
fn division_by_non_monic_is_rejected() {
    let a = Poly::from_i64s(&[1, 2, 3]);
    assert!(a.div_rem_monic(&Poly::from_i64s(&[1, 2])).is_err());
    assert!(a.div_rem_monic(&Poly::one()).is_err());
    assert!(a.div_exact_monic(&Poly::from_i64s(&[1, 1])).is_err());
}
