//! Dense univariate polynomials in `q` with arbitrary-precision integer
//! coefficients. Only what the rational-function field needs: ring ops,
//! content / primitive part, pseudo-remainder gcd and exact division.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients are stored low degree first with no trailing zeros, so the
/// zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplicity of `q` as a factor (lowest nonzero degree).
    pub fn order(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        !self.is_zero() && self.order() + 1 == self.coeffs.len()
    }

    pub fn shift_down(&self, k: usize) -> Self {
        debug_assert!(k <= self.order() || self.is_zero());
        IntPoly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides every coefficient by `c`; `c` must divide all of them.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead().unwrap().is_negative() {
            c = -c;
        }
        if c.is_one() {
            self.clone()
        } else {
            self.div_scalar(&c)
        }
    }

    /// Pseudo-remainder of `self` by `divisor`: `lc(divisor)^k * self mod divisor`.
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let db = divisor.degree().expect("pseudo_rem by zero");
        let lb = divisor.lead().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lead().unwrap().clone();
            // r <- lb*r - lr*q^(dr-db)*divisor
            r = r.scale(&lb).sub(&divisor.scale(&lr).shift_up(dr - db));
        }
        r
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let t = self.order().min(other.order());
        let mut a = self.shift_down(self.order()).primitive();
        let mut b = other.shift_down(other.order()).primitive();
        let qpow = IntPoly::monomial(BigInt::one(), t);
        if a.is_constant() || b.is_constant() {
            return qpow;
        }
        if a == b {
            return qpow.mul(&a);
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
            if b.is_constant() && !b.is_zero() {
                return qpow;
            }
        }
        qpow.mul(&a.primitive())
    }

    /// Exact quotient over the integers; `None` if `divisor` does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let db = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lb = divisor.lead().unwrap();
        let mut r = self.clone();
        let ds = self.degree().unwrap();
        if ds < db {
            return None;
        }
        let mut quot = vec![BigInt::zero(); ds - db + 1];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (qc, rem) = r.lead().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            r = r.sub(&divisor.scale(&qc).shift_up(dr - db));
            quot[dr - db] = qc;
        }
        Some(Self::from_coeffs(quot))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Renders in the DSL syntax, highest degree first, e.g. `2*q^2 - q + 1`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Total order used only for deterministic output.
    pub fn cmp_structural(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_shared_factor() {
        // (q-1)(q+2) and (q-1)(q^2+1)
        let a = IntPoly::from_i64s(&[-1, 1]).mul(&IntPoly::from_i64s(&[2, 1]));
        let b = IntPoly::from_i64s(&[-1, 1]).mul(&IntPoly::from_i64s(&[1, 0, 1]));
        assert_eq!(a.gcd(&b), IntPoly::from_i64s(&[-1, 1]));
    }

    #[test]
    fn gcd_strips_q_powers() {
        let a = IntPoly::from_i64s(&[0, 0, 3, 3]);
        let b = IntPoly::from_i64s(&[0, 6]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64s(&[0, 1]));
    }

    #[test]
    fn exact_division() {
        let a = IntPoly::from_i64s(&[-1, 0, 1]);
        let b = IntPoly::from_i64s(&[-1, 1]);
        assert_eq!(a.exact_div(&b), Some(IntPoly::from_i64s(&[1, 1])));
        assert_eq!(a.exact_div(&IntPoly::from_i64s(&[2, 1])), None);
    }

    #[test]
    fn render_is_descending() {
        assert_eq!(IntPoly::from_i64s(&[1, -1, 2]).render(), "2*q^2 - q + 1");
        assert_eq!(IntPoly::from_i64s(&[0, -1]).render(), "-q");
    }
}
