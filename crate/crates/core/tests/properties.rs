use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qgl11::dsl::{format_element, format_tensor, parse_element, parse_tensor};
use qgl11::hopf::{coproduct, coproduct_left, coproduct_right, counit, counit_legs};
use qgl11::pairing::{
    pair_closed_elements, pair_oracle, pbw_products, CartanA, CartanB, GammaFunction,
};
use qgl11::superalg::random;
use qgl11::{Element, LaurentSeries, QScalar};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn scalar() -> impl Strategy<Value = QScalar> {
    any::<u64>().prop_map(|s| random::scalar(&mut rng(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&(&a * &a.inv().unwrap()) - &QScalar::one()).is_zero());
        }
        prop_assert_eq!(a.to_string(), (&(&a + &b) - &b).to_string());
    }

    #[test]
    fn series_inverse(coeffs in proptest::collection::vec(scalar(), 1..5), n in 0i64..6) {
        prop_assume!(!coeffs[0].is_zero());
        let s = LaurentSeries::exact(0, coeffs);
        let inv = s.invert(n).unwrap();
        let prod = s.mul(&inv).unwrap();
        for k in 0..=n {
            let expected = if k == 0 { QScalar::one() } else { QScalar::zero() };
            prop_assert_eq!(prod.coeff(k).unwrap_or_default(), expected);
        }
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (x, y, z) = (random::word(&mut r, 2, 2), random::word(&mut r, 2, 2), random::word(&mut r, 2, 2));
        prop_assert_eq!(x.times(&y).times(&z), x.times(&y.times(&z)));
    }

    #[test]
    fn coproduct_is_a_counital_coassociative_morphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random::element(&mut r, 2, 2, 2);
        let y = random::word(&mut r, 2, 2);
        prop_assert_eq!(coproduct(&x.times(&y)), coproduct(&x).times(&coproduct(&y)));
        let d = coproduct(&x);
        prop_assert_eq!(coproduct_left(&d), coproduct_right(&d));
        let (l, rr) = counit_legs(&d);
        prop_assert_eq!(&l, &x);
        prop_assert_eq!(&rr, &x);
        prop_assert_eq!(counit(&x.times(&y)), &counit(&x) * &counit(&y));
    }

    #[test]
    fn format_parse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random::element(&mut r, 3, 3, 3);
        let s = format_element(&x);
        prop_assert_eq!(parse_element(&s).unwrap(), x.clone());
        let t = coproduct(&x);
        prop_assert_eq!(parse_tensor(&format_tensor(&t)).unwrap(), t);
    }

    #[test]
    fn closed_pairing_matches_oracle(i in 0usize..1000, j in 0usize..1000, k in -1i64..=1, kp in -1i64..=1) {
        let fs = GammaFunction::enumerate(2, 2);
        let (f, g) = (&fs[i % fs.len()], &fs[j % fs.len()]);
        let x = CartanA(k, 1).element().times(&pbw_products(f).0);
        let y = CartanB(kp, -k).element().times(&pbw_products(g).1);
        prop_assert_eq!(pair_closed_elements(&x, &y).unwrap(), pair_oracle(&x, &y).unwrap());
        if f != g {
            prop_assert!(pair_oracle(&x, &y).unwrap().is_zero());
        }
    }

    #[test]
    fn pairing_is_bilinear(i in 0usize..1000, c in scalar()) {
        let fs = GammaFunction::enumerate(2, 2);
        let f = &fs[i % fs.len()];
        let (e, ff) = pbw_products(f);
        let x = e.scaled(&c).plus(&Element::one());
        let lhs = pair_oracle(&x, &ff).unwrap();
        let rhs = &(&c * &pair_oracle(&e, &ff).unwrap()) + &pair_oracle(&Element::one(), &ff).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
