//! Truncated Laurent series in the spectral variable.
//!
//! A series stores the coefficients of degrees `lo..=hi`. Everything below
//! `lo` is zero. Above `hi` the coefficients are either unknown (a truncated
//! series) or zero (an exact Laurent polynomial). Products only report
//! degrees that no truncation can have touched.

use crate::error::{Error, Result};
use crate::scalars::QScalar;

/// Ring operations a series coefficient must provide.
///
/// `zero_like`/`one_like` take a template so carriers with a shape (square
/// matrices) can produce identities of the right size.
pub trait SeriesCoeff: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &QScalar) -> Self;
    fn try_inverse(&self) -> Option<Self>;

    fn neg(&self) -> Self {
        self.scale(&QScalar::from_int(-1))
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl SeriesCoeff for QScalar {
    fn zero_like(&self) -> Self {
        QScalar::zero()
    }
    fn one_like(&self) -> Self {
        QScalar::one()
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &QScalar) -> Self {
        self * c
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// Inverse of `1 + n` for nilpotent `n` by the terminating Neumann series.
/// Returns `None` if `x - 1` is not nilpotent within `max_steps` powers.
pub fn unipotent_inverse<T: SeriesCoeff + PartialEq>(x: &T, max_steps: usize) -> Option<T> {
    let one = x.one_like();
    let n = x.sub(&one);
    let mut acc = one.clone();
    let mut power = one;
    for _ in 0..max_steps {
        power = power.mul(&n).neg();
        if power.is_zero() {
            return Some(acc);
        }
        acc = acc.add(&power);
    }
    None
}

/// Which variable the series is written in: `z` or `z^{-1}`.
///
/// A `ZInv` series stores the coefficient of `z^{-k}` at index `k`, so the
/// same algorithms (exp, inversion) apply to currents in `z^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Z,
    ZInv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<T> {
    lo: i64,
    coeffs: Vec<T>,
    truncated: bool,
    orientation: Orientation,
}

impl<T: SeriesCoeff> LaurentSeries<T> {
    /// A truncated series with coefficients for degrees `lo..lo+len`.
    pub fn truncated(lo: i64, coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series window holds at least one degree"
        );
        LaurentSeries {
            lo,
            coeffs,
            truncated: true,
            orientation: Orientation::Z,
        }
    }

    /// An exact Laurent polynomial: coefficients above the window are zero.
    pub fn exact(lo: i64, coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series window holds at least one degree"
        );
        LaurentSeries {
            lo,
            coeffs,
            truncated: false,
            orientation: Orientation::Z,
        }
    }

    /// The constant `c` as an exact series.
    pub fn constant(c: T) -> Self {
        Self::exact(0, vec![c])
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    fn template(&self) -> &T {
        &self.coeffs[0]
    }

    /// Coefficient of degree `k`; `None` if truncation hides it.
    pub fn coeff(&self, k: i64) -> Option<T> {
        if k < self.lo {
            Some(self.template().zero_like())
        } else if k > self.hi() {
            if self.truncated {
                None
            } else {
                Some(self.template().zero_like())
            }
        } else {
            Some(self.coeffs[(k - self.lo) as usize].clone())
        }
    }

    /// Like [`coeff`](Self::coeff) but borrows when the degree is stored.
    pub fn get(&self, k: i64) -> Option<&T> {
        if k < self.lo || k > self.hi() {
            None
        } else {
            Some(&self.coeffs[(k - self.lo) as usize])
        }
    }

    /// Highest degree known without truncation error, or `None` for exact
    /// series (all degrees known).
    pub fn known_hi(&self) -> Option<i64> {
        self.truncated.then(|| self.hi())
    }

    fn check_orientation(&self, other: &Self) -> Result<()> {
        if self.orientation != other.orientation {
            return Err(Error::Window(
                "series in z and in z^-1 cannot be combined".into(),
            ));
        }
        Ok(())
    }

    /// Restricts the window to degrees `<= hi` (marking the series truncated).
    pub fn truncate(&self, hi: i64) -> Result<Self> {
        if hi < self.lo {
            return Err(Error::Window(format!(
                "cannot truncate at {hi} below lo = {}",
                self.lo
            )));
        }
        let mut coeffs = Vec::with_capacity((hi - self.lo + 1) as usize);
        for k in self.lo..=hi {
            coeffs.push(self.coeff(k).ok_or_else(|| {
                Error::Window(format!(
                    "degree {k} is beyond the known window [{}, {}]",
                    self.lo,
                    self.hi()
                ))
            })?);
        }
        Ok(LaurentSeries {
            lo: self.lo,
            coeffs,
            truncated: true,
            orientation: self.orientation,
        })
    }

    /// Pads an exact series with explicit zeros up to degree `hi`.
    pub fn extend_to(&self, hi: i64) -> Result<Self> {
        if hi <= self.hi() {
            return Ok(self.clone());
        }
        if self.truncated {
            return Err(Error::Window(format!(
                "cannot extend a truncated series from {} to {hi}",
                self.hi()
            )));
        }
        let mut out = self.clone();
        let z = self.template().zero_like();
        out.coeffs.resize((hi - self.lo + 1) as usize, z);
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_orientation(other)?;
        let lo = self.lo.min(other.lo);
        let hi = match (self.known_hi(), other.known_hi()) {
            (None, None) => self.hi().max(other.hi()),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        if hi < lo {
            return Err(Error::Window("sum has an empty window".into()));
        }
        let coeffs = (lo..=hi)
            .map(|k| self.coeff(k).unwrap().add(&other.coeff(k).unwrap()))
            .collect();
        Ok(LaurentSeries {
            lo,
            coeffs,
            truncated: self.truncated || other.truncated,
            orientation: self.orientation,
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn map<F: Fn(&T) -> T>(&self, f: F) -> Self {
        LaurentSeries {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(f).collect(),
            truncated: self.truncated,
            orientation: self.orientation,
        }
    }

    /// Fallible coefficient map into another carrier.
    pub fn try_map<U: SeriesCoeff, F: Fn(&T) -> Result<U>>(
        &self,
        f: F,
    ) -> Result<LaurentSeries<U>> {
        Ok(LaurentSeries {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
            truncated: self.truncated,
            orientation: self.orientation,
        })
    }

    /// Product. Degree `k` is reported only if every contributing pair of
    /// coefficients is known.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_orientation(other)?;
        let lo = self.lo + other.lo;
        let mut hi = self.hi() + other.hi();
        if self.truncated {
            hi = hi.min(self.hi() + other.lo);
        }
        if other.truncated {
            hi = hi.min(other.hi() + self.lo);
        }
        let zero = self.template().zero_like();
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let mut acc = zero.clone();
            let i_lo = self.lo.max(k - other.hi());
            let i_hi = self.hi().min(k - other.lo);
            for i in i_lo..=i_hi {
                let a = &self.coeffs[(i - self.lo) as usize];
                if a.is_zero() {
                    continue;
                }
                let b = &other.coeffs[(k - i - other.lo) as usize];
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            coeffs.push(acc);
        }
        Ok(LaurentSeries {
            lo,
            coeffs,
            truncated: self.truncated || other.truncated,
            orientation: self.orientation,
        })
    }

    /// Left multiplication of every coefficient by a constant.
    pub fn left_mul_const(&self, c: &T) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn right_mul_const(&self, c: &T) -> Self {
        self.map(|x| x.mul(c))
    }

    /// Lowest degree carrying a nonzero coefficient, if any within the window.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lo + i as i64)
    }

    /// `exp(X)` through degree `n`. `X` must vanish in degrees `<= 0`.
    pub fn exp(&self, n: i64) -> Result<Self> {
        for k in self.lo..=self.hi().min(0) {
            if !self.coeffs[(k - self.lo) as usize].is_zero() {
                return Err(Error::Window(format!(
                    "exp needs a series without terms of degree <= 0, found degree {k}"
                )));
            }
        }
        let n = match self.known_hi() {
            Some(h) => n.min(h),
            None => n,
        };
        let one = self.template().one_like();
        let mut result = LaurentSeries::truncated(0, vec![one.clone()])
            .with_orientation(self.orientation)
            .extend_exact_zeros(n);
        if n <= 0 {
            return Ok(result.with_orientation(self.orientation));
        }
        let x = self.clip(1, n);
        let mut power = LaurentSeries::truncated(0, vec![one])
            .with_orientation(self.orientation)
            .extend_exact_zeros(n);
        for k in 1..=n {
            power = power.mul_clipped(&x, n);
            let inv_fact = QScalar::from_ratio(1, k);
            power = power.scale(&inv_fact);
            result = result.add_clipped(&power, n);
            if power.coeffs.iter().all(|c| c.is_zero()) {
                break;
            }
        }
        Ok(result.with_orientation(self.orientation))
    }

    /// `exp(X)` through degree `n` for a series whose coefficients commute
    /// pairwise, by the recurrence `k g_k = sum_j j x_j g_{k-j}` that
    /// follows from `g' = X' g`. Same preconditions as [`Self::exp`].
    pub fn exp_commuting(&self, n: i64) -> Result<Self> {
        for k in self.lo..=self.hi().min(0) {
            if !self.coeffs[(k - self.lo) as usize].is_zero() {
                return Err(Error::Window(format!(
                    "exp needs a series without terms of degree <= 0, found degree {k}"
                )));
            }
        }
        let n = match self.known_hi() {
            Some(h) => n.min(h),
            None => n,
        };
        let one = self.template().one_like();
        let mut out = vec![one];
        for k in 1..=n.max(0) {
            let mut acc = out[0].zero_like();
            for j in 1..=k {
                let xj = self.get(j).cloned().unwrap_or_else(|| acc.zero_like());
                if xj.is_zero() {
                    continue;
                }
                acc = acc.add(&xj.mul(&out[(k - j) as usize]).scale(&QScalar::from_int(j)));
            }
            out.push(acc.scale(&QScalar::from_ratio(1, k)));
        }
        Ok(LaurentSeries::truncated(0, out).with_orientation(self.orientation))
    }

    /// `log(X)` through degree `n` for `X` with constant term one.
    pub fn log(&self, n: i64) -> Result<Self> {
        let one = self.template().one_like();
        let y =
            self.sub(&LaurentSeries::constant(one.clone()).with_orientation(self.orientation))?;
        for k in y.lo..=y.hi().min(0) {
            if !y.coeffs[(k - y.lo) as usize].is_zero() {
                return Err(Error::Window(
                    "log needs a series with constant term one".into(),
                ));
            }
        }
        let n = match y.known_hi() {
            Some(h) => n.min(h),
            None => n,
        };
        let zero = one.zero_like();
        let mut result = LaurentSeries::truncated(0, vec![zero])
            .with_orientation(self.orientation)
            .extend_exact_zeros(n);
        let y = y.clip(1, n.max(1));
        let mut power = LaurentSeries::truncated(0, vec![one])
            .with_orientation(self.orientation)
            .extend_exact_zeros(n);
        for k in 1..=n {
            power = power.mul_clipped(&y, n);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            result = result.add_clipped(&power.scale(&QScalar::from_ratio(sign, k)), n);
        }
        Ok(result.with_orientation(self.orientation))
    }

    /// Multiplicative inverse through degree `n`. The lowest nonzero
    /// coefficient must sit in degree zero and be invertible.
    pub fn invert(&self, n: i64) -> Result<Self> {
        let v = self
            .valuation()
            .ok_or_else(|| Error::NotInvertible("series is zero on its window".into()))?;
        if v != 0 {
            return Err(Error::NotInvertible(format!(
                "leading degree is {v}, expected 0"
            )));
        }
        let n = match self.known_hi() {
            Some(h) => n.min(h),
            None => n,
        };
        let x0 = self.get(0).unwrap();
        let x0_inv = x0
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("leading coefficient".into()))?;
        let mut out: Vec<T> = vec![x0_inv.clone()];
        for k in 1..=n {
            let mut acc = x0.zero_like();
            for i in 1..=k {
                let xi = self.coeff(i).unwrap();
                if xi.is_zero() {
                    continue;
                }
                acc = acc.add(&xi.mul(&out[(k - i) as usize]));
            }
            out.push(x0_inv.mul(&acc).neg());
        }
        Ok(LaurentSeries::truncated(0, out).with_orientation(self.orientation))
    }

    fn extend_exact_zeros(mut self, hi: i64) -> Self {
        let z = self.template().zero_like();
        if hi > self.hi() {
            self.coeffs.resize((hi - self.lo + 1) as usize, z);
        }
        self
    }

    /// Window `[lo, hi]` copy treating unknown degrees as zero (internal use
    /// only where the caller has already bounded the degrees it reads).
    fn clip(&self, lo: i64, hi: i64) -> Self {
        let z = self.template().zero_like();
        let coeffs = (lo..=hi)
            .map(|k| self.get(k).cloned().unwrap_or_else(|| z.clone()))
            .collect();
        LaurentSeries {
            lo,
            coeffs,
            truncated: true,
            orientation: self.orientation,
        }
    }

    fn mul_clipped(&self, other: &Self, n: i64) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        a.truncated = false;
        b.truncated = false;
        let p = a.mul(&b).expect("same orientation");
        p.clip(0, n)
    }

    fn add_clipped(&self, other: &Self, n: i64) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        a.truncated = false;
        b.truncated = false;
        a.add(&b).expect("same orientation").clip(0, n)
    }
}

impl<T: SeriesCoeff + PartialEq> LaurentSeries<T> {
    /// Compares two series on the degrees both know. Returns the first
    /// differing degree, if any.
    pub fn first_difference(&self, other: &Self) -> Option<i64> {
        let lo = self.lo.min(other.lo);
        let hi = match (self.known_hi(), other.known_hi()) {
            (None, None) => self.hi().max(other.hi()),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        (lo..=hi).find(|&k| self.coeff(k) != other.coeff(k))
    }
}

/// Taylor expansion of `num(z) / den(z)` through degree `n`; both
/// polynomials are given low degree first.
pub fn expand_rational(num: &[QScalar], den: &[QScalar], n: i64) -> Result<LaurentSeries<QScalar>> {
    let d0 = den
        .first()
        .filter(|d| !d.is_zero())
        .ok_or(Error::DivisionByZero)?;
    let d0_inv = d0.inv()?;
    let mut out: Vec<QScalar> = Vec::with_capacity(n.max(0) as usize + 1);
    for k in 0..=n.max(0) as usize {
        let mut acc = num.get(k).cloned().unwrap_or_default();
        for i in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= &(&den[i] * &out[k - i]);
        }
        out.push(&acc * &d0_inv);
    }
    Ok(LaurentSeries::truncated(0, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::qbracket;

    fn s(n: i64) -> QScalar {
        QScalar::from_int(n)
    }

    fn q() -> QScalar {
        QScalar::q()
    }

    #[test]
    fn commuting_exp_matches_power_sum() {
        let x = LaurentSeries::truncated(
            0,
            vec![
                s(0),
                q(),
                QScalar::from_ratio(1, 3),
                qbracket(2).unwrap(),
                s(-2),
            ],
        );
        assert_eq!(x.exp(4).unwrap(), x.exp_commuting(4).unwrap());
        let l = x.exp_commuting(4).unwrap().log(4).unwrap();
        assert_eq!(l, x);
    }

    #[test]
    fn product_of_binomials() {
        let a = LaurentSeries::truncated(0, vec![s(1), s(1), s(0)]);
        let b = LaurentSeries::truncated(0, vec![s(1), s(-1), s(0)]);
        let p = a.mul(&b).unwrap();
        assert_eq!((p.lo(), p.hi()), (0, 2));
        assert_eq!(p.coeffs(), &[s(1), s(0), s(-1)]);
    }

    #[test]
    fn sum_window_is_the_known_part() {
        let a = LaurentSeries::truncated(0, vec![s(1); 6]);
        let b = LaurentSeries::truncated(-1, vec![s(1); 5]);
        let c = a.add(&b).unwrap();
        assert_eq!((c.lo(), c.hi()), (-1, 3));
        assert_eq!(c.coeff(-1), Some(s(1)));
        assert_eq!(c.coeff(0), Some(s(2)));
    }

    #[test]
    fn product_window_nonnegative() {
        let n = 5;
        let a = LaurentSeries::truncated(0, vec![s(2); n + 1]);
        let p = a.mul(&a).unwrap();
        assert_eq!((p.lo(), p.hi()), (0, n as i64));
    }

    #[test]
    fn product_window_shrinks_for_laurent_inputs() {
        let a = LaurentSeries::truncated(-2, vec![s(1); 5]); // [-2, 2]
        let b = LaurentSeries::truncated(0, vec![s(1); 5]); // [0, 4]
        let p = a.mul(&b).unwrap();
        assert_eq!((p.lo(), p.hi()), (-2, 2));
    }

    #[test]
    fn exp_reproduces_rational_function() {
        // exp(sum (1 - q^{2s})/s z^s) = (1 - q^2 z)/(1 - z)
        let n = 3;
        let mut coeffs = vec![s(0)];
        for k in 1..=n {
            coeffs.push((&s(1) - &q().pow(2 * k)) * QScalar::from_ratio(1, k));
        }
        let e = LaurentSeries::truncated(0, coeffs).exp(n).unwrap();
        let expected = expand_rational(&[s(1), -q().pow(2)], &[s(1), s(-1)], n).unwrap();
        assert_eq!(e, expected);
        let one_minus_q2 = &s(1) - &q().pow(2);
        assert_eq!(
            expected.coeffs(),
            &[
                s(1),
                one_minus_q2.clone(),
                one_minus_q2.clone(),
                one_minus_q2
            ]
        );
    }

    #[test]
    fn exp_of_zero() {
        let z = LaurentSeries::truncated(0, vec![s(0), s(0)]);
        assert_eq!(z.exp(1).unwrap().coeffs(), &[s(1), s(0)]);
    }

    #[test]
    fn exp_rejects_constant_term() {
        let x = LaurentSeries::truncated(0, vec![s(1), s(1)]);
        assert!(x.exp(3).is_err());
    }

    #[test]
    fn geometric_inverse() {
        let x = LaurentSeries::exact(0, vec![s(1), s(-1)]);
        let inv = x.invert(3).unwrap();
        assert_eq!(inv.coeffs(), &[s(1), s(1), s(1), s(1)]);
    }

    #[test]
    fn invert_rejects_shifted_series() {
        let x = LaurentSeries::exact(1, vec![s(1)]);
        assert!(matches!(x.invert(3), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn expand_one_over_one_minus_z() {
        let e = expand_rational(&[s(1)], &[s(1), s(-1)], 4).unwrap();
        assert!(e.coeffs().iter().all(|c| c.is_one()));
        assert!(expand_rational(&[s(1)], &[s(0), s(1)], 4).is_err());
    }

    #[test]
    fn expand_in_ratio_variable() {
        // (1 - x)/(q - q^-1 x) with x = w/z
        let qi = QScalar::q_pow(-1);
        let e = expand_rational(&[s(1), s(-1)], &[q(), -qi.clone()], 2).unwrap();
        assert_eq!(e.coeff(0).unwrap(), qi);
        assert_eq!(
            e.coeff(1).unwrap(),
            &QScalar::q_pow(-3) - &QScalar::q_pow(-1)
        );
        assert_eq!(
            e.coeff(2).unwrap(),
            &QScalar::q_pow(-5) - &QScalar::q_pow(-3)
        );
    }

    #[test]
    fn expand_times_denominator_is_numerator() {
        let num = [s(2), q(), s(0), s(-1)];
        let den = [s(1), -q(), qbracket(2).unwrap()];
        let n = 6;
        let e = expand_rational(&num, &den, n).unwrap();
        let d = LaurentSeries::exact(0, den.to_vec());
        let p = e.mul(&d).unwrap();
        for k in 0..=n {
            assert_eq!(
                p.coeff(k).unwrap(),
                num.get(k as usize).cloned().unwrap_or_default()
            );
        }
    }

    #[test]
    fn exp_log_round_trip() {
        let x = LaurentSeries::truncated(0, vec![s(0), q(), s(3), -q().pow(2), s(0)]);
        let back = x.exp(4).unwrap().log(4).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn orientation_mismatch_is_an_error() {
        let a = LaurentSeries::truncated(0, vec![s(1)]);
        let b = a.clone().with_orientation(Orientation::ZInv);
        assert!(a.mul(&b).is_err());
    }
}
