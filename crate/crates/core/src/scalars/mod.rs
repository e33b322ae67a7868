//! The coefficient field Q(q): exact rational functions in the deformation
//! parameter `q`.
//!
//! Every value is kept in a canonical reduced form, so structural equality
//! coincides with equality in the field. Negative powers of `q` live in the
//! denominator.

mod poly;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use poly::IntPoly;

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Element of Q(q) stored as `num / den` with `num, den ∈ Z[q]`.
///
/// Invariants: `den != 0`, `gcd(num, den) = 1` in Q[q], the integer contents
/// of `num` and `den` are coprime and `den` has a positive leading
/// coefficient. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: IntPoly,
    den: IntPoly,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        QScalar {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        QScalar {
            num: IntPoly::constant(n),
            den: IntPoly::one(),
        }
    }

    pub fn from_rational(r: &Rational) -> Self {
        Self::from_parts(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
        .expect("rational has nonzero denominator")
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let m = IntPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            QScalar {
                num: m,
                den: IntPoly::one(),
            }
        } else {
            QScalar {
                num: IntPoly::one(),
                den: m,
            }
        }
    }

    /// Builds and canonicalizes `num / den`.
    pub fn from_parts(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        let mut c = num.content().gcd(&den.content());
        if den.lead().unwrap().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        QScalar { num, den }
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value does not depend on `q`.
    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if !self.is_rational() {
            return None;
        }
        let n = self.num.coeffs().first().cloned().unwrap_or_default();
        let d = self.den.coeffs()[0].clone();
        Some(Rational::new(n, d))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact evaluation at `q = q0`.
    pub fn specialize(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() {
            return Err(Error::Pole {
                at: q0.to_string(),
                value: self.to_string(),
            });
        }
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(Error::Pole {
                at: q0.to_string(),
                value: self.to_string(),
            });
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Renders as a DSL factor, parenthesized unless it is a single atom.
    pub fn render_factor(&self) -> String {
        let s = self.to_string();
        let atomic = self.den.is_one()
            && self.num.term_count() == 1
            && !self.num.lead().unwrap().is_negative();
        if atomic {
            s
        } else {
            format!("({s})")
        }
    }
}

/// The quantum integer `[s] = (q^s - q^-s) / (q - q^-1)`.
pub fn qbracket(s: i64) -> Result<QScalar> {
    if s == 0 {
        return Err(Error::ZeroIndex("qbracket"));
    }
    // [s] = q^{1-s} (1 + q^2 + ... + q^{2(s-1)}) for s > 0.
    let n = s.unsigned_abs() as usize;
    let mut coeffs = vec![BigInt::zero(); 2 * n - 1];
    for i in 0..n {
        coeffs[2 * i] = BigInt::one();
    }
    let value = &QScalar::from_parts(IntPoly::from_coeffs(coeffs), IntPoly::one())?
        * &QScalar::q_pow(1 - n as i64);
    Ok(if s > 0 { value } else { -value })
}

/// `q - q^{-1}`, which appears everywhere.
pub fn q_minus_qinv() -> QScalar {
    &QScalar::q() - &QScalar::q_pow(-1)
}

/// Exact evaluation of `a` at `q = q0`.
pub fn specialize_q(a: &QScalar, q0: &Rational) -> Result<Rational> {
    a.specialize(q0)
}

impl Default for QScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            let n = if self.num.term_count() == 1 && !self.num.lead().unwrap().is_negative() {
                self.num.render()
            } else {
                format!("({})", self.num)
            };
            let bare = self.den.is_constant() || self.den.lead().is_some_and(|c| c.is_one());
            let d = if self.den.term_count() == 1 && bare {
                self.den.render()
            } else {
                format!("({})", self.den)
            };
            write!(f, "{n}/{d}")
        }
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return QScalar::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        QScalar::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() || rhs.is_zero() {
            return QScalar::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QScalar {
                num: self.num.mul(&rhs.num),
                den: IntPoly::one(),
            };
        }
        // Cross-cancel before multiplying to keep the gcd small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        QScalar::canonical(n1.mul(&n2), d1.mul(&d2))
    }
}

impl<'a> Div<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    /// Panics on division by zero; use [`QScalar::checked_div`] otherwise.
    fn div(self, rhs: &QScalar) -> QScalar {
        self.checked_div(rhs).expect("division by zero in Q(q)")
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QScalar> for &'a QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, rhs: &QScalar) {
        *self = &*self * rhs;
    }
}

/// Parses a rational literal such as `3`, `-2/5`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> QScalar {
        QScalar::q()
    }

    fn qi() -> QScalar {
        QScalar::q_pow(-1)
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn additive_inverse() {
        assert!((q() + (-q())).is_zero());
    }

    #[test]
    fn product_with_inverse_power() {
        let a = &q() - &qi();
        assert_eq!(a * q(), &q().pow(2) - &QScalar::one());
    }

    #[test]
    fn division_reduces_by_gcd() {
        let num = &q().pow(2) - &QScalar::one();
        let den = &q() - &QScalar::one();
        assert_eq!(num.checked_div(&den).unwrap(), q() + QScalar::one());
    }

    #[test]
    fn display_keeps_denominators_grouped() {
        assert_eq!(
            QScalar::from_ratio(2, 3)
                .checked_div(&q())
                .unwrap()
                .to_string(),
            "2/(3*q)"
        );
        assert_eq!(
            QScalar::from_int(2)
                .checked_div(&q().pow(2))
                .unwrap()
                .to_string(),
            "2/q^2"
        );
        assert_eq!((&q() * &QScalar::from_ratio(2, 3)).to_string(), "2*q/3");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            q().checked_div(&QScalar::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn qbracket_values() {
        assert!(qbracket(1).unwrap().is_one());
        assert_eq!(qbracket(2).unwrap(), q() + qi());
        assert_eq!(qbracket(-3).unwrap(), -qbracket(3).unwrap());
        assert!(qbracket(0).is_err());
    }

    #[test]
    fn qbracket_matches_definition() {
        for s in (-20i64..=20).filter(|&s| s != 0) {
            let lhs = qbracket(s).unwrap() * q_minus_qinv();
            assert_eq!(lhs, &QScalar::q_pow(s) - &QScalar::q_pow(-s), "s = {s}");
        }
    }

    #[test]
    fn specialization() {
        assert_eq!(
            specialize_q(&qbracket(2).unwrap(), &rat(2, 1)).unwrap(),
            rat(5, 2)
        );
        let a = &q().pow(2) - &QScalar::one();
        assert_eq!(specialize_q(&a, &rat(3, 1)).unwrap(), rat(8, 1));
        let pole = QScalar::one().checked_div(&q_minus_qinv()).unwrap();
        assert!(matches!(
            specialize_q(&pole, &rat(1, 1)),
            Err(Error::Pole { .. })
        ));
        assert!(specialize_q(&q(), &rat(0, 1)).is_err());
    }

    #[test]
    fn canonical_form_invariants() {
        let a = QScalar::from_parts(
            IntPoly::from_i64s(&[-2, 0, 2]),
            IntPoly::from_i64s(&[4, -4]),
        )
        .unwrap();
        // (2q^2-2)/(4-4q) = -(q+1)/2
        assert_eq!(a, -(q() + QScalar::one()) * QScalar::from_ratio(1, 2));
        assert!(a.denom().lead().unwrap().is_positive());
    }

    fn arb_scalar() -> impl Strategy<Value = QScalar> {
        (
            proptest::collection::vec(-3i64..=3, 1..4),
            proptest::collection::vec(-3i64..=3, 1..3),
            -2i64..=2,
        )
            .prop_filter_map("nonzero denominator", |(n, d, shift)| {
                let den = IntPoly::from_i64s(&d);
                if den.is_zero() {
                    return None;
                }
                let v = QScalar::from_parts(IntPoly::from_i64s(&n), den).ok()?;
                Some(v * QScalar::q_pow(shift))
            })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn canonical_after_roundtrip(a in arb_scalar(), b in arb_scalar()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
        }
    }
}
