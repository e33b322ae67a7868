//! Normal ordering. A product `x * y` is computed by pushing the letters of
//! each monomial of `x`, right to left, into the normal-ordered `y`. Each
//! single-letter step applies one defining relation at the leftmost
//! out-of-order position:
//!
//! - `C_s` central, `h`'s commute among themselves;
//! - `h_s E_n = E_n h_s + q^s [s]/s E_{n+s}`, `h_s F_n = F_n h_s - q^s [s]/s F_{n+s}`;
//! - `E_m F_n = -F_n E_m + (q - q^-1)(phi+_{m+n} - phi-_{m+n})`;
//! - `E`'s (and `F`'s) anticommute and square to zero;
//! - `k_i x = q^{(qdeg x, eps_i)} x k_i`.

use std::collections::BTreeMap;

use super::{add_term, Element, Letter, Monomial, RootDatum};
use crate::scalars::{q_minus_qinv, qbracket, QScalar};

/// `q^s [s] / s`, the structure constant of `[h_s, E_n]`.
pub(crate) fn h_constant(s: i64) -> QScalar {
    &(&QScalar::q_pow(s) * &qbracket(s).expect("nonzero index")) * &QScalar::from_ratio(1, s)
}

/// Inserts an odd index into a strictly increasing block from the left.
/// Returns the sign from anticommuting past smaller indices, or `None`
/// when the index is already present (the product vanishes).
fn insert_odd(block: &mut Vec<i64>, n: i64) -> Option<i64> {
    match block.binary_search(&n) {
        Ok(_) => None,
        Err(pos) => {
            block.insert(pos, n);
            Some(if pos % 2 == 0 { 1 } else { -1 })
        }
    }
}

/// `k_i^e x k_i^{-e} = q^{e (qdeg x, eps_i)} x`, so `k_i^e` passing left to
/// right over an `F` picks up `q^{-e (alpha, eps_i)}`.
fn k_past_f_exponent(i: usize, e: i64, f_count: usize) -> i64 {
    -e * RootDatum::alpha_pairing(i) * f_count as i64
}

fn lmul_letter_elem(l: Letter, x: &Element) -> Element {
    let mut out = BTreeMap::new();
    for (m, c) in x.terms() {
        for (m2, c2) in lmul_letter(l, m).into_terms() {
            add_term(&mut out, m2, &c2 * c);
        }
    }
    Element { terms: out }
}

/// `l * m` in normal form.
fn lmul_letter(l: Letter, m: &Monomial) -> Element {
    match l {
        Letter::F(n) => {
            let mut out = m.clone();
            match insert_odd(&mut out.f, n) {
                None => Element::zero(),
                Some(sign) => Element::term(out, QScalar::from_int(sign)),
            }
        }
        Letter::C(s) => {
            let mut out = m.clone();
            *out.c.entry(s).or_insert(0) += 1;
            Element::from_monomial(out)
        }
        Letter::K1(e) | Letter::K2(e) => {
            if e == 0 {
                return Element::from_monomial(m.clone());
            }
            let i = if matches!(l, Letter::K1(_)) { 1 } else { 2 };
            let mut out = m.clone();
            if i == 1 {
                out.k1 += e;
            } else {
                out.k2 += e;
            }
            let c = QScalar::q_pow(k_past_f_exponent(i, e, m.f.len()));
            Element::term(out, c)
        }
        Letter::H(s) => {
            if m.f.is_empty() {
                let mut out = m.clone();
                *out.h.entry(s).or_insert(0) += 1;
                return Element::from_monomial(out);
            }
            // h_s F_a rest = F_a (h_s rest) - q^s[s]/s F_{a+s} rest
            let a = m.f[0];
            let mut rest = m.clone();
            rest.f.remove(0);
            let moved = lmul_letter_elem(Letter::F(a), &lmul_letter(Letter::H(s), &rest));
            let bracket = lmul_letter(Letter::F(a + s), &rest);
            let mut out = moved;
            out.add_scaled(&bracket, &-h_constant(s));
            out
        }
        Letter::E(n) => lmul_e(n, m),
    }
}

fn lmul_e(n: i64, m: &Monomial) -> Element {
    if !m.f.is_empty() {
        // E_n F_a rest = -F_a (E_n rest) + (q - q^-1)(phi+_{n+a} - phi-_{n+a}) rest
        let a = m.f[0];
        let mut rest = m.clone();
        rest.f.remove(0);
        let mut out = lmul_letter_elem(Letter::F(a), &lmul_e(n, &rest));
        out = out.scaled(&QScalar::from_int(-1));
        let phi = phi_difference(n + a);
        if !phi.is_zero() {
            let rest_el = Element::from_monomial(rest);
            out.add_scaled(&multiply(&phi, &rest_el), &q_minus_qinv());
        }
        return out;
    }
    if m.k1 != 0 || m.k2 != 0 {
        // E_n k1^a k2^b = q^{-(a (alpha,eps_1) + b (alpha,eps_2))} k1^a k2^b E_n
        let mut rest = m.clone();
        rest.k1 = 0;
        rest.k2 = 0;
        let factor = QScalar::q_pow(
            -(m.k1 * RootDatum::alpha_pairing(1) + m.k2 * RootDatum::alpha_pairing(2)),
        );
        let mut out = BTreeMap::new();
        for (mut m2, c2) in lmul_e(n, &rest).into_terms() {
            m2.k1 += m.k1;
            m2.k2 += m.k2;
            add_term(&mut out, m2, &c2 * &factor);
        }
        return Element { terms: out };
    }
    if let Some((&s, _)) = m.h.iter().next() {
        // E_n h_s rest = h_s (E_n rest) - q^s[s]/s E_{n+s} rest
        let mut rest = m.clone();
        let p = rest.h.get_mut(&s).unwrap();
        *p -= 1;
        if *p == 0 {
            rest.h.remove(&s);
        }
        let mut out = lmul_letter_elem(Letter::H(s), &lmul_e(n, &rest));
        out.add_scaled(&lmul_e(n + s, &rest), &-h_constant(s));
        return out;
    }
    let mut out = m.clone();
    match insert_odd(&mut out.e, n) {
        None => Element::zero(),
        Some(sign) => Element::term(out, QScalar::from_int(sign)),
    }
}

/// `phi+_k - phi-_k` (only one of the two is nonzero unless `k = 0`).
fn phi_difference(k: i64) -> Element {
    let mut out = Element::zero();
    if k >= 0 {
        out = out.plus(&phi_mode(PhiSign::Plus, k));
    }
    if k <= 0 {
        out = out.minus(&phi_mode(PhiSign::Minus, -k));
    }
    out
}

/// Product of two elements in normal form.
pub fn multiply(x: &Element, y: &Element) -> Element {
    let mut out = Element::zero();
    if x.is_zero() || y.is_zero() {
        return out;
    }
    for (m, c) in x.terms() {
        let mut acc = y.clone();
        for l in m.letters().into_iter().rev() {
            acc = lmul_letter_elem(l, &acc);
            if acc.is_zero() {
                break;
            }
        }
        out.add_scaled(&acc, c);
    }
    out
}

pub fn multiply_monomials(a: &Monomial, b: &Monomial) -> Element {
    multiply(
        &Element::from_monomial(a.clone()),
        &Element::from_monomial(b.clone()),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhiSign {
    Plus,
    Minus,
}

/// Partitions of `n` as multiplicity maps `part -> count`.
pub(crate) fn partitions(n: i64) -> Vec<BTreeMap<i64, u32>> {
    fn go(n: i64, max: i64, cur: &mut BTreeMap<i64, u32>, out: &mut Vec<BTreeMap<i64, u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            *cur.entry(part).or_insert(0) += 1;
            go(n - part, part, cur, out);
            let p = cur.get_mut(&part).unwrap();
            *p -= 1;
            if *p == 0 {
                cur.remove(&part);
            }
        }
    }
    let mut out = Vec::new();
    if n >= 0 {
        go(n, n, &mut BTreeMap::new(), &mut out);
    }
    out
}

/// `phi+_n` (for `Plus`) or `phi-_{-n}` (for `Minus`), `n >= 0`:
/// `(k1^-1 k2)^{±1}` times the degree-`n` coefficient of
/// `exp(±(q - q^-1) sum_{s>0} C_{±s} z^{±s})`.
pub fn phi_mode(sign: PhiSign, n: i64) -> Element {
    if n < 0 {
        return Element::zero();
    }
    let (pre, t, dir) = match sign {
        PhiSign::Plus => (Monomial::cartan(-1, 1), q_minus_qinv(), 1),
        PhiSign::Minus => (Monomial::cartan(1, -1), -q_minus_qinv(), -1),
    };
    let mut out = Element::zero();
    for part in partitions(n) {
        let mut m = pre.clone();
        let mut coeff = QScalar::one();
        for (&s, &count) in &part {
            m.c.insert(dir * s, count);
            let fact: i64 = (1..=count as i64).product();
            coeff = &(&coeff * &t.pow(count as i64)) * &QScalar::from_ratio(1, fact);
        }
        out.add_term(m, coeff);
    }
    out
}
