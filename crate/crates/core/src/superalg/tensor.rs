//! `U ⊗ U` (and `U^{⊗3}`) with the Koszul sign rule
//! `(a ⊗ b)(c ⊗ d) = (-1)^{|b||c|} ac ⊗ bd`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{add_term, multiply_monomials, render_sum, Element, Monomial, Parity};
use crate::scalars::QScalar;
use crate::series::{unipotent_inverse, SeriesCoeff};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Monomial, Monomial), QScalar>,
}

/// Memoizes monomial products within one tensor product computation.
#[derive(Default)]
pub(crate) struct ProductCache {
    map: HashMap<(Monomial, Monomial), Element>,
}

impl ProductCache {
    pub(crate) fn product(&mut self, a: &Monomial, b: &Monomial) -> &Element {
        if a.is_one() || b.is_one() {
            let key = (a.clone(), b.clone());
            return self.map.entry(key).or_insert_with(|| {
                Element::from_monomial(if a.is_one() { b.clone() } else { a.clone() })
            });
        }
        self.map
            .entry((a.clone(), b.clone()))
            .or_insert_with(|| multiply_monomials(a, b))
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::pure(&Element::one(), &Element::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        Self::one().scaled(&c)
    }

    /// `a ⊗ b`.
    pub fn pure(a: &Element, b: &Element) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                add_term(&mut terms, (ma.clone(), mb.clone()), ca * cb);
            }
        }
        TensorElement { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial), QScalar> {
        &self.terms
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

    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: QScalar) {
        add_term(&mut self.terms, (a, b), c);
    }

    pub fn add_scaled(&mut self, other: &TensorElement, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            add_term(&mut self.terms, k.clone(), v * c);
        }
    }

    pub fn plus(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_scaled(other, &QScalar::one());
        out
    }

    pub fn minus(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_scaled(other, &QScalar::from_int(-1));
        out
    }

    pub fn scaled(&self, c: &QScalar) -> TensorElement {
        let mut out = TensorElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Koszul-signed product.
    pub fn times(&self, other: &TensorElement) -> TensorElement {
        let mut cache = ProductCache::default();
        self.times_cached(other, &mut cache)
    }

    pub(crate) fn times_cached(
        &self,
        other: &TensorElement,
        cache: &mut ProductCache,
    ) -> TensorElement {
        let mut out = BTreeMap::new();
        for ((a, b), c1) in &self.terms {
            for ((c, d), c2) in &other.terms {
                let sign = if b.parity() == Parity::Odd && c.parity() == Parity::Odd {
                    -1
                } else {
                    1
                };
                let coef = &(c1 * c2) * &QScalar::from_int(sign);
                let ac = cache.product(a, c).clone();
                if ac.is_zero() {
                    continue;
                }
                let bd = cache.product(b, d).clone();
                for (ma, ca) in ac.terms() {
                    let cac = ca * &coef;
                    for (mb, cb) in bd.terms() {
                        add_term(&mut out, (ma.clone(), mb.clone()), &cac * cb);
                    }
                }
            }
        }
        TensorElement { terms: out }
    }

    /// Koszul flip `a ⊗ b -> (-1)^{|a||b|} b ⊗ a`.
    pub fn flip(&self) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((a, b), c) in &self.terms {
            let sign = if a.parity() == Parity::Odd && b.parity() == Parity::Odd {
                -1
            } else {
                1
            };
            out.add_term(b.clone(), a.clone(), c * &QScalar::from_int(sign));
        }
        out
    }

    /// Applies linear maps to each leg: `f ⊗ g`. Both maps must be even.
    pub fn map_legs<F, G>(&self, f: F, g: G) -> TensorElement
    where
        F: Fn(&Monomial) -> Element,
        G: Fn(&Monomial) -> Element,
    {
        let mut out = TensorElement::zero();
        for ((a, b), c) in &self.terms {
            let fa = f(a);
            let gb = g(b);
            out.add_scaled(&TensorElement::pure(&fa, &gb), c);
        }
        out
    }

    /// Renders in the DSL with `#` separating the legs.
    pub fn render(&self) -> String {
        render_sum(
            self.terms
                .iter()
                .map(|((a, b), c)| (c, format!("{} # {}", a.render(), b.render()))),
        )
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl SeriesCoeff for TensorElement {
    fn zero_like(&self) -> Self {
        TensorElement::zero()
    }
    fn one_like(&self) -> Self {
        TensorElement::one()
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
        let one = (Monomial::one(), Monomial::one());
        let c0 = self.terms.get(&one).cloned()?;
        let c0_inv = c0.inv().ok()?;
        unipotent_inverse(&self.scaled(&c0_inv), 64).map(|x| x.scaled(&c0_inv))
    }
}

/// `U^{⊗3}` without products, enough for coassociativity checks.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Tensor3 {
    terms: BTreeMap<(Monomial, Monomial, Monomial), QScalar>,
}

impl Tensor3 {
    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: Monomial, v: QScalar) {
        add_term(&mut self.terms, (a, b, c), v);
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, Monomial, Monomial), QScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
