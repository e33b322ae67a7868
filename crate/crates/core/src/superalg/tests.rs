use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalars::q_minus_qinv;
use crate::series::LaurentSeries;

fn q() -> QScalar {
    QScalar::q()
}

#[test]
fn e_times_f_reorders_with_phi() {
    let lhs = Element::e(0).times(&Element::f(0));
    let fe = Element::f(0).times(&Element::e(0));
    assert_eq!(fe.len(), 1, "F_0 E_0 is already normal");
    let expected = fe.scaled(&QScalar::from_int(-1)).plus(
        &Element::k(-1, 1)
            .minus(&Element::k(1, -1))
            .scaled(&q_minus_qinv()),
    );
    assert_eq!(lhs, expected);
}

#[test]
fn e_times_h_uses_d3() {
    let lhs = Element::e(1).times(&Element::h(1));
    let expected = Element::h(1)
        .times(&Element::e(1))
        .minus(&Element::e(2).scaled(&q()));
    assert_eq!(lhs, expected);
}

#[test]
fn odd_squares_vanish() {
    assert!(Element::e(0).times(&Element::e(0)).is_zero());
    assert!(Element::f(3).times(&Element::f(3)).is_zero());
}

#[test]
fn e_past_k1() {
    let lhs = Element::e(0).times(&Element::k(1, 0));
    let expected = Element::k(1, 0)
        .times(&Element::e(0))
        .scaled(&QScalar::q_pow(-1));
    assert_eq!(lhs, expected);
    assert_eq!(expected.terms().keys().next().unwrap().render(), "k1*E[0]");
}

#[test]
fn grading_examples() {
    let m = Element::e(3).times(&Element::f(-1)).times(&Element::h(2));
    for mono in m.terms().keys() {
        let g = mono.grading();
        assert_eq!((g.z_deg, g.q_deg, g.parity), (4, 0, Parity::Even));
    }
    let g = Element::e(0).grading().unwrap();
    assert_eq!(g.q_deg, 1);
    let g = Element::k(1, 0).grading().unwrap();
    assert_eq!((g.z_deg, g.q_deg, g.parity), (0, 0, Parity::Even));
}

#[test]
fn root_datum() {
    assert_eq!(RootDatum::alpha_pairing(1), 1);
    assert_eq!(RootDatum::alpha_pairing(2), 1);
    assert_eq!(
        RootDatum::form(1, 1) - 2 * RootDatum::form(1, 2) + RootDatum::form(2, 2),
        0
    );
}

#[test]
fn phi_modes() {
    assert_eq!(phi_mode(PhiSign::Plus, 0), Element::k(-1, 1));
    assert_eq!(phi_mode(PhiSign::Minus, 0), Element::k(1, -1));
    let expected = Element::k(-1, 1)
        .times(&Element::c(1))
        .scaled(&q_minus_qinv());
    assert_eq!(phi_mode(PhiSign::Plus, 1), expected);
    assert!(phi_mode(PhiSign::Plus, -1).is_zero());
}

#[test]
fn phi_modes_match_series_exponential() {
    let n = 5;
    let mut coeffs = vec![Element::zero()];
    for s in 1..=n {
        coeffs.push(Element::c(s).scaled(&q_minus_qinv()));
    }
    let e = LaurentSeries::truncated(0, coeffs).exp(n).unwrap();
    for k in 0..=n {
        assert_eq!(
            Element::k(-1, 1).times(&e.coeff(k).unwrap()),
            phi_mode(PhiSign::Plus, k)
        );
    }
}

#[test]
fn exp_of_single_c_term() {
    let x = LaurentSeries::truncated(
        0,
        vec![
            Element::zero(),
            Element::c(1).scaled(&q_minus_qinv()),
            Element::zero(),
        ],
    );
    let e = x.exp(2).unwrap();
    assert_eq!(e.coeff(0).unwrap(), Element::one());
    assert_eq!(e.coeff(1).unwrap(), Element::c(1).scaled(&q_minus_qinv()));
    let half_sq = &(&q_minus_qinv() * &q_minus_qinv()) * &QScalar::from_ratio(1, 2);
    assert_eq!(e.coeff(2).unwrap(), Element::c(1).pow(2).scaled(&half_sq));
}

#[test]
fn tensor_examples() {
    let one = Element::one();
    let a = TensorElement::pure(&one, &Element::e(0));
    let b = TensorElement::pure(&Element::e(1), &one);
    assert_eq!(
        a.times(&b),
        TensorElement::pure(&Element::e(1), &Element::e(0)).scaled(&QScalar::from_int(-1))
    );
    let c = TensorElement::pure(&Element::e(0), &one);
    let d = TensorElement::pure(&one, &Element::f(1));
    assert_eq!(
        c.times(&d),
        TensorElement::pure(&Element::e(0), &Element::f(1))
    );
    let x = TensorElement::pure(&Element::e(0), &Element::f(1));
    assert!(x.times(&x).is_zero());
}

#[test]
fn anticommutation_of_odd_letters() {
    for m in -5..=5 {
        for n in -5..=5 {
            let e = Element::e(m)
                .times(&Element::e(n))
                .plus(&Element::e(n).times(&Element::e(m)));
            assert!(e.is_zero(), "E_{m} E_{n}");
            let f = Element::f(m)
                .times(&Element::f(n))
                .plus(&Element::f(n).times(&Element::f(m)));
            assert!(f.is_zero(), "F_{m} F_{n}");
        }
    }
}

#[test]
fn cartan_conjugation() {
    for (k1, k2) in [(1, 0), (0, 1)] {
        let k = Element::k(k1, k2);
        let kinv = Element::k(-k1, -k2);
        for n in -2..=2 {
            assert_eq!(
                k.times(&Element::e(n)).times(&kinv),
                Element::e(n).scaled(&q())
            );
            assert_eq!(
                k.times(&Element::f(n)).times(&kinv),
                Element::f(n).scaled(&QScalar::q_pow(-1))
            );
        }
    }
}

#[test]
fn associativity_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let x = random::word(&mut rng, 4, 3);
        let y = random::word(&mut rng, 4, 3);
        let z = random::word(&mut rng, 4, 3);
        assert_eq!(
            x.times(&y).times(&z),
            x.times(&y.times(&z)),
            "{x} | {y} | {z}"
        );
    }
}

#[test]
fn centrality_and_grading_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let x = random::word(&mut rng, 4, 3);
        for s in [-2, 1, 3] {
            let c = Element::c(s);
            assert_eq!(c.times(&x), x.times(&c));
        }
        let y = random::word(&mut rng, 4, 3);
        if let (Some(gx), Some(gy)) = (x.grading(), y.grading()) {
            let p = x.times(&y);
            if let Some(g) = p.grading() {
                assert_eq!(g.z_deg, gx.z_deg + gy.z_deg);
                assert_eq!(g.q_deg, gx.q_deg + gy.q_deg);
                assert_eq!(g.parity.bit(), (gx.parity.bit() + gy.parity.bit()) % 2);
            }
        }
    }
}

#[test]
fn tensor_associativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let mut t = Vec::new();
        for _ in 0..3 {
            let a = random::word(&mut rng, 3, 2);
            let b = random::word(&mut rng, 3, 2);
            t.push(TensorElement::pure(&a, &b));
        }
        assert_eq!(
            t[0].times(&t[1]).times(&t[2]),
            t[0].times(&t[1].times(&t[2]))
        );
    }
}

#[test]
fn monomial_constructor_rejects_bad_data() {
    assert!(Monomial::new(
        vec![2, 1],
        0,
        0,
        Default::default(),
        Default::default(),
        vec![]
    )
    .is_err());
    let mut h = std::collections::BTreeMap::new();
    h.insert(0, 1);
    assert!(Monomial::new(vec![], 0, 0, h, Default::default(), vec![]).is_err());
    assert!(Letter::H(0).validate().is_err());
}
