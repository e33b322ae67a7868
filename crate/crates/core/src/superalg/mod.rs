//! The superalgebra `U` in its Drinfeld presentation.
//!
//! Elements are sparse combinations of PBW monomials in the normal order
//! `F`-block, Cartan block, `E`-block. Products are normal-ordered by the
//! rewrite engine in [`rewrite`]; [`TensorElement`] is the Koszul-signed
//! tensor square.

mod rewrite;
mod tensor;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::QScalar;
use crate::series::{unipotent_inverse, SeriesCoeff};

pub use rewrite::{multiply, multiply_monomials, phi_mode, PhiSign};
pub use tensor::{Tensor3, TensorElement};

/// A Drinfeld generator. `K1(e)`/`K2(e)` stand for `(s_11^{(0)})^e` and
/// `(s_22^{(0)})^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E(i64),
    F(i64),
    H(i64),
    C(i64),
    K1(i64),
    K2(i64),
}

impl Letter {
    pub fn validate(self) -> Result<Self> {
        match self {
            Letter::H(0) => Err(Error::ZeroIndex("h")),
            Letter::C(0) => Err(Error::ZeroIndex("C")),
            _ => Ok(self),
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Letter::E(_) | Letter::F(_))
    }

    pub fn z_degree(self) -> i64 {
        match self {
            Letter::E(n) | Letter::F(n) | Letter::H(n) | Letter::C(n) => n,
            Letter::K1(_) | Letter::K2(_) => 0,
        }
    }

    /// Coefficient of `alpha` in the Q-degree.
    pub fn q_degree(self) -> i64 {
        match self {
            Letter::E(_) => 1,
            Letter::F(_) => -1,
            _ => 0,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::E(n) => write!(f, "E[{n}]"),
            Letter::F(n) => write!(f, "F[{n}]"),
            Letter::H(n) => write!(f, "h[{n}]"),
            Letter::C(n) => write!(f, "C[{n}]"),
            Letter::K1(1) => write!(f, "k1"),
            Letter::K2(1) => write!(f, "k2"),
            Letter::K1(e) => write!(f, "k1^{e}"),
            Letter::K2(e) => write!(f, "k2^{e}"),
        }
    }
}

/// Parity of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// `Z`-degree, `Q`-degree (as a multiple of `alpha`) and parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grading {
    pub z_deg: i64,
    pub q_deg: i64,
    pub parity: Parity,
}

/// The root datum: `(eps_i, eps_j) = delta_ij d_i` with `d = (1, -1)`.
pub struct RootDatum;

impl RootDatum {
    pub const D: [i64; 2] = [1, -1];

    /// `(eps_i, eps_j)` for `i, j` in `{1, 2}`.
    pub fn form(i: usize, j: usize) -> i64 {
        if i == j {
            Self::D[i - 1]
        } else {
            0
        }
    }

    /// `(alpha, eps_i)` with `alpha = eps_1 - eps_2`.
    pub fn alpha_pairing(i: usize) -> i64 {
        Self::form(1, i) - Self::form(2, i)
    }
}

/// Normal-ordered PBW monomial `F_{f1} F_{f2} .. k1^a k2^b prod h^. prod C^. E_{e1} E_{e2} ..`
/// with strictly increasing `F`- and `E`-indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub(crate) f: Vec<i64>,
    pub(crate) k1: i64,
    pub(crate) k2: i64,
    pub(crate) h: BTreeMap<i64, u32>,
    pub(crate) c: BTreeMap<i64, u32>,
    pub(crate) e: Vec<i64>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.f.is_empty()
            && self.e.is_empty()
            && self.h.is_empty()
            && self.c.is_empty()
            && self.k1 == 0
            && self.k2 == 0
    }

    /// Builds a monomial from already normal-ordered data.
    pub fn new(
        f: Vec<i64>,
        k1: i64,
        k2: i64,
        h: BTreeMap<i64, u32>,
        c: BTreeMap<i64, u32>,
        e: Vec<i64>,
    ) -> Result<Self> {
        let increasing = |v: &[i64]| v.windows(2).all(|w| w[0] < w[1]);
        if !increasing(&f) || !increasing(&e) {
            return Err(Error::Invalid(
                "E/F indices must be strictly increasing".into(),
            ));
        }
        if h.keys().chain(c.keys()).any(|&s| s == 0) {
            return Err(Error::ZeroIndex("h/C"));
        }
        if h.values().chain(c.values()).any(|&p| p == 0) {
            return Err(Error::Invalid("zero exponent stored".into()));
        }
        Ok(Monomial { f, k1, k2, h, c, e })
    }

    pub fn cartan(k1: i64, k2: i64) -> Self {
        Monomial {
            k1,
            k2,
            ..Default::default()
        }
    }

    pub fn f_indices(&self) -> &[i64] {
        &self.f
    }

    pub fn e_indices(&self) -> &[i64] {
        &self.e
    }

    pub fn k_exponents(&self) -> (i64, i64) {
        (self.k1, self.k2)
    }

    pub fn h_exponents(&self) -> &BTreeMap<i64, u32> {
        &self.h
    }

    pub fn c_exponents(&self) -> &BTreeMap<i64, u32> {
        &self.c
    }

    /// True if the monomial only contains `k1`, `k2`.
    pub fn is_group_like(&self) -> bool {
        self.f.is_empty() && self.e.is_empty() && self.h.is_empty() && self.c.is_empty()
    }

    pub fn odd_count(&self) -> usize {
        self.f.len() + self.e.len()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.odd_count())
    }

    pub fn z_degree(&self) -> i64 {
        self.f.iter().sum::<i64>()
            + self.e.iter().sum::<i64>()
            + self.h.iter().map(|(s, p)| s * *p as i64).sum::<i64>()
            + self.c.iter().map(|(s, p)| s * *p as i64).sum::<i64>()
    }

    pub fn q_degree(&self) -> i64 {
        self.e.len() as i64 - self.f.len() as i64
    }

    pub fn grading(&self) -> Grading {
        Grading {
            z_deg: self.z_degree(),
            q_deg: self.q_degree(),
            parity: self.parity(),
        }
    }

    /// Number of letters, counting powers with multiplicity.
    pub fn length(&self) -> usize {
        self.f.len()
            + self.e.len()
            + self.h.values().map(|&p| p as usize).sum::<usize>()
            + self.c.values().map(|&p| p as usize).sum::<usize>()
            + self.k1.unsigned_abs() as usize
            + self.k2.unsigned_abs() as usize
    }

    /// The letters of the normal-ordered word; `k`-powers are single letters.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = self.f.iter().map(|&n| Letter::F(n)).collect();
        if self.k1 != 0 {
            out.push(Letter::K1(self.k1));
        }
        if self.k2 != 0 {
            out.push(Letter::K2(self.k2));
        }
        for (&s, &p) in &self.h {
            out.extend(std::iter::repeat_n(Letter::H(s), p as usize));
        }
        for (&s, &p) in &self.c {
            out.extend(std::iter::repeat_n(Letter::C(s), p as usize));
        }
        out.extend(self.e.iter().map(|&n| Letter::E(n)));
        out
    }

    /// Letters with `k`-powers split into unit letters `K(±1)`.
    pub fn unit_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for l in self.letters() {
            match l {
                Letter::K1(e) => out.extend(std::iter::repeat_n(
                    Letter::K1(e.signum()),
                    e.unsigned_abs() as usize,
                )),
                Letter::K2(e) => out.extend(std::iter::repeat_n(
                    Letter::K2(e.signum()),
                    e.unsigned_abs() as usize,
                )),
                other => out.push(other),
            }
        }
        out
    }

    /// Renders as a DSL product, `1` for the empty word.
    pub fn render(&self) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts: Vec<String> = self.f.iter().map(|n| format!("F[{n}]")).collect();
        let kpow = |name: &str, e: i64| {
            if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        };
        if self.k1 != 0 {
            parts.push(kpow("k1", self.k1));
        }
        if self.k2 != 0 {
            parts.push(kpow("k2", self.k2));
        }
        for (s, p) in &self.h {
            parts.push(if *p == 1 {
                format!("h[{s}]")
            } else {
                format!("h[{s}]^{p}")
            });
        }
        for (s, p) in &self.c {
            parts.push(if *p == 1 {
                format!("C[{s}]")
            } else {
                format!("C[{s}]^{p}")
            });
        }
        parts.extend(self.e.iter().map(|n| format!("E[{n}]")));
        parts.join("*")
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.z_degree(), self.q_degree(), self.length())
            .cmp(&(other.z_degree(), other.q_degree(), other.length()))
            .then_with(|| self.f.cmp(&other.f))
            .then_with(|| (self.k1, self.k2).cmp(&(other.k1, other.k2)))
            .then_with(|| self.h.cmp(&other.h))
            .then_with(|| self.c.cmp(&other.c))
            .then_with(|| self.e.cmp(&other.e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub(crate) fn add_term<K: Ord>(map: &mut BTreeMap<K, QScalar>, key: K, c: QScalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Finite linear combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Monomial, QScalar>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, QScalar::one())
    }

    pub fn term(m: Monomial, c: QScalar) -> Self {
        let mut terms = BTreeMap::new();
        add_term(&mut terms, m, c);
        Element { terms }
    }

    /// A single generator as an element (already normal-ordered).
    pub fn letter(l: Letter) -> Self {
        let mut m = Monomial::one();
        match l {
            Letter::E(n) => m.e.push(n),
            Letter::F(n) => m.f.push(n),
            Letter::H(s) => {
                if s != 0 {
                    m.h.insert(s, 1);
                }
            }
            Letter::C(s) => {
                if s != 0 {
                    m.c.insert(s, 1);
                }
            }
            Letter::K1(e) => m.k1 = e,
            Letter::K2(e) => m.k2 = e,
        }
        Element::from_monomial(m)
    }

    pub fn e(n: i64) -> Self {
        Self::letter(Letter::E(n))
    }
    pub fn f(n: i64) -> Self {
        Self::letter(Letter::F(n))
    }
    pub fn h(s: i64) -> Self {
        Self::letter(Letter::H(s))
    }
    pub fn c(s: i64) -> Self {
        Self::letter(Letter::C(s))
    }
    pub fn k(k1: i64, k2: i64) -> Self {
        Self::from_monomial(Monomial::cartan(k1, k2))
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, QScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, QScalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> QScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: QScalar) {
        add_term(&mut self.terms, m, c);
    }

    pub fn add_scaled(&mut self, other: &Element, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            add_term(&mut self.terms, m.clone(), v * c);
        }
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &QScalar::one());
        out
    }

    pub fn minus(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &QScalar::from_int(-1));
        out
    }

    pub fn scaled(&self, c: &QScalar) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    /// Product in `U`, normal-ordered.
    pub fn times(&self, other: &Element) -> Element {
        multiply(self, other)
    }

    pub fn pow(&self, n: u32) -> Element {
        (0..n).fold(Element::one(), |acc, _| acc.times(self))
    }

    /// Grading shared by all terms, or `None` if inhomogeneous (or zero).
    pub fn grading(&self) -> Option<Grading> {
        let mut it = self.terms.keys().map(Monomial::grading);
        let g = it.next()?;
        it.all(|h| h == g).then_some(g)
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let p = it.next()?;
        it.all(|h| h == p).then_some(p)
    }

    /// The scalar value if the element is a multiple of `1`.
    pub fn as_scalar(&self) -> Option<QScalar> {
        match self.terms.len() {
            0 => Some(QScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Supercommutator `[x, y] = xy - (-1)^{|x||y|} yx` for homogeneous inputs.
    pub fn supercommutator(&self, other: &Element) -> Element {
        let odd = matches!(
            (self.parity(), other.parity()),
            (Some(Parity::Odd), Some(Parity::Odd))
        );
        let xy = self.times(other);
        let yx = other.times(self);
        if odd {
            xy.plus(&yx)
        } else {
            xy.minus(&yx)
        }
    }

    /// Renders in the DSL, terms in monomial order.
    pub fn render(&self) -> String {
        render_sum(self.terms.iter().map(|(m, c)| (c, m.render())))
    }
}

/// Joins `coefficient * body` terms with signs; shared by elements and tensors.
pub(crate) fn render_sum<'a, I: Iterator<Item = (&'a QScalar, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (c, body) in terms {
        let neg = c
            .numer()
            .lead()
            .is_some_and(|l| l.sign() == num_bigint::Sign::Minus);
        let abs = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if abs.is_one() {
            out.push_str(&body);
        } else if body == "1" {
            out.push_str(&abs.render_factor());
        } else {
            out.push_str(&format!("{}*{}", abs.render_factor(), body));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl SeriesCoeff for Element {
    fn zero_like(&self) -> Self {
        Element::zero()
    }
    fn one_like(&self) -> Self {
        Element::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }
    fn scale(&self, c: &QScalar) -> Self {
        self.scaled(c)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_group_like() {
                return Some(Element::term(Monomial::cartan(-m.k1, -m.k2), c.inv().ok()?));
            }
        }
        let c0 = self.coefficient(&Monomial::one());
        if c0.is_zero() {
            return None;
        }
        let normalized = self.scaled(&c0.inv().ok()?);
        unipotent_inverse(&normalized, 64).map(|x| x.scaled(&c0.inv().unwrap()))
    }
}

#[cfg(test)]
mod tests;

/// Seeded random words and elements for property checks and suites.
pub mod random {
    use rand::Rng;

    use super::{Element, Letter};
    use crate::scalars::QScalar;

    /// A random letter with indices in `-bound..=bound` (`k` exponents ±1).
    pub fn letter<R: Rng>(rng: &mut R, bound: i64) -> Letter {
        let nonzero = |rng: &mut R| loop {
            let s = rng.gen_range(-bound..=bound);
            if s != 0 {
                break s;
            }
        };
        match rng.gen_range(0..6) {
            0 => Letter::E(rng.gen_range(-bound..=bound)),
            1 => Letter::F(rng.gen_range(-bound..=bound)),
            2 => Letter::H(nonzero(rng)),
            3 => Letter::C(nonzero(rng)),
            4 => Letter::K1(if rng.gen_bool(0.5) { 1 } else { -1 }),
            _ => Letter::K2(if rng.gen_bool(0.5) { 1 } else { -1 }),
        }
    }

    /// Product of `1..=max_len` random letters, normal-ordered.
    pub fn word<R: Rng>(rng: &mut R, bound: i64, max_len: usize) -> Element {
        let len = rng.gen_range(1..=max_len);
        (0..len).fold(Element::one(), |acc, _| {
            acc.times(&Element::letter(letter(rng, bound)))
        })
    }

    /// A small random scalar `a q^k / b`.
    pub fn scalar<R: Rng>(rng: &mut R) -> QScalar {
        let a = loop {
            let a = rng.gen_range(-4i64..=4);
            if a != 0 {
                break a;
            }
        };
        let b = rng.gen_range(1i64..=3);
        let mut c = &QScalar::from_ratio(a, b) * &QScalar::q_pow(rng.gen_range(-2..=2));
        if rng.gen_bool(0.3) {
            c = &c + &QScalar::q_pow(rng.gen_range(1..=3));
        }
        c
    }

    /// Random linear combination of up to `terms` random words.
    pub fn element<R: Rng>(rng: &mut R, bound: i64, max_len: usize, terms: usize) -> Element {
        let n = rng.gen_range(1..=terms);
        let mut out = Element::zero();
        for _ in 0..n {
            out.add_scaled(&word(rng, bound, max_len), &scalar(rng));
        }
        out
    }
}
