//! Dense matrices over a commutative coefficient ring, with the graded
//! (super) Kronecker product and leg embeddings for multi-fold tensor
//! products of super vector spaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::QScalar;
use crate::series::SeriesCoeff;

/// A commutative ring usable as a matrix entry.
pub trait Entry: SeriesCoeff + PartialEq + fmt::Debug {
    fn zero_entry() -> Self;
    fn one_entry() -> Self;
}

impl Entry for QScalar {
    fn zero_entry() -> Self {
        QScalar::zero()
    }
    fn one_entry() -> Self {
        QScalar::one()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T = QScalar> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type QMatrix = Matrix<QScalar>;

fn sign<T: Entry>(x: T, odd: bool) -> T {
    if odd {
        x.neg()
    } else {
        x
    }
}

impl<T: Entry> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero_entry(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one_entry());
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zero(n, n);
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// The matrix unit `E_ij` (zero-based) of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n, n);
        m.set(i, j, T::one_entry());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&QScalar::from_int(-1)))
    }

    pub fn scaled(&self, c: &QScalar) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn times_entry(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn times(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn map<U: Entry, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Plain Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            let (i, k) = (r / other.rows, r % other.rows);
            let (j, l) = (c / other.cols, c % other.cols);
            self.get(i, j).mul(other.get(k, l))
        })
    }

    /// Graded Kronecker product `A ⊗ B` acting on `V ⊗ W` by
    /// `(A ⊗ B)(v_j ⊗ w_l) = (-1)^{|B||v_j|} A v_j ⊗ B w_l`, entrywise
    /// `A_ij B_kl (-1)^{(p_k + p_l) p_j}`. `pa`, `pb` are the basis parities.
    pub fn super_kron(&self, pa: &[u8], other: &Self, pb: &[u8]) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            let (i, k) = (r / other.rows, r % other.rows);
            let (j, l) = (c / other.cols, c % other.cols);
            let x = self.get(i, j).mul(other.get(k, l));
            sign(x, (pb[k] + pb[l]) * pa[j] % 2 == 1)
        })
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible("non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    inv.data.swap(piv * n + j, col * n + j);
                }
            }
            let p = a
                .get(col, col)
                .try_inverse()
                .ok_or_else(|| Error::NotInvertible("pivot".into()))?;
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].mul(&p);
                inv.data[col * n + j] = inv.data[col * n + j].mul(&p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    a.data[r * n + j] = a.data[r * n + j].sub(&f.mul(&a.data[col * n + j]));
                    inv.data[r * n + j] = inv.data[r * n + j].sub(&f.mul(&inv.data[col * n + j]));
                }
            }
        }
        Ok(inv)
    }

    /// Sub-matrix on the given row and column index lists.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// First nonzero position of `self - other`.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }
}

impl QMatrix {
    /// Parse-free compact rendering, one row per line.
    pub fn render(&self) -> String {
        (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", row.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl<T: Entry> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:?}", self.get(i, j)))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Entry> SeriesCoeff for Matrix<T> {
    fn zero_like(&self) -> Self {
        Self::zero(self.rows, self.cols)
    }
    fn one_like(&self) -> Self {
        Self::identity(self.rows)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_matrix()
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
        self.inverse().ok()
    }
}

/// Basis layout of a multi-fold tensor product: the parities of each leg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Legs {
    parities: Vec<Vec<u8>>,
}

impl Legs {
    pub fn new(parities: Vec<Vec<u8>>) -> Self {
        Legs { parities }
    }

    pub fn dim(&self) -> usize {
        self.parities.iter().map(Vec::len).product()
    }

    /// Multi-index of a flat basis index (first leg most significant).
    fn split(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.parities.len()];
        for (k, p) in self.parities.iter().enumerate().rev() {
            out[k] = idx % p.len();
            idx /= p.len();
        }
        out
    }

    fn join(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.parities)
            .fold(0, |acc, (&m, p)| acc * p.len() + m)
    }

    /// Parity vector of the whole product space.
    pub fn total_parities(&self) -> Vec<u8> {
        (0..self.dim())
            .map(|idx| {
                let m = self.split(idx);
                m.iter().zip(&self.parities).map(|(&x, p)| p[x]).sum::<u8>() % 2
            })
            .collect()
    }

    /// Places an operator on legs `i < j` (given as a graded Kronecker
    /// matrix on `V_i ⊗ V_j`) into the full product, with the Koszul sign
    /// of each factor passing the legs to its left.
    pub fn embed_pair<T: Entry>(&self, m: &Matrix<T>, i: usize, j: usize) -> Matrix<T> {
        assert!(i < j && j < self.parities.len());
        let (pi, pj) = (&self.parities[i], &self.parities[j]);
        let dj = pj.len();
        let n = self.dim();
        let mut out = Matrix::zero(n, n);
        for c in 0..n {
            let cm = self.split(c);
            let col = cm[i] * dj + cm[j];
            for ri in 0..pi.len() {
                for rj in 0..dj {
                    let v = m.get(ri * dj + rj, col);
                    if v.is_zero() {
                        continue;
                    }
                    let px = (pi[ri] + pi[cm[i]]) as usize;
                    let py = (pj[rj] + pj[cm[j]]) as usize;
                    let before_i: usize = (0..i).map(|k| self.parities[k][cm[k]] as usize).sum();
                    let before_j: usize = (0..j)
                        .filter(|&k| k != i)
                        .map(|k| self.parities[k][cm[k]] as usize)
                        .sum();
                    let odd = (px * before_i + py * before_j) % 2 == 1;
                    let mut rm = cm.clone();
                    rm[i] = ri;
                    rm[j] = rj;
                    out.set(self.join(&rm), c, sign(v.clone(), odd));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QScalar {
        QScalar::q()
    }

    #[test]
    fn super_kron_signs() {
        let e12 = QMatrix::unit(2, 0, 1);
        let e21 = QMatrix::unit(2, 1, 0);
        let p = [0u8, 1];
        // E_12 ⊗ E_21 sends v_2 ⊗ v_1 to -v_1 ⊗ v_2.
        let m = e12.super_kron(&p, &e21, &p);
        assert_eq!(*m.get(1, 2), QScalar::from_int(-1));
        let m = e21.super_kron(&p, &e12, &p);
        assert_eq!(*m.get(2, 1), QScalar::one());
    }

    #[test]
    fn super_kron_is_multiplicative_with_koszul_sign() {
        let p = [0u8, 1];
        let a = QMatrix::unit(2, 0, 1);
        let b = QMatrix::unit(2, 1, 0);
        let c = QMatrix::unit(2, 1, 0);
        let d = QMatrix::unit(2, 0, 1);
        // (a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd with |b| = |c| = 1
        let lhs = a.super_kron(&p, &b, &p).times(&c.super_kron(&p, &d, &p));
        let rhs = a
            .times(&c)
            .super_kron(&p, &b.times(&d), &p)
            .scaled(&QScalar::from_int(-1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embeddings_agree_with_kronecker() {
        let p = vec![0u8, 1];
        let legs = Legs::new(vec![p.clone(), p.clone(), p.clone()]);
        let x = QMatrix::from_fn(2, 2, |i, j| QScalar::from_int((i * 2 + j + 1) as i64));
        let y = QMatrix::unit(2, 0, 1).plus(&QMatrix::unit(2, 1, 1).scaled(&q()));
        let xy = x.super_kron(&p, &y, &p);
        let id = QMatrix::identity(2);
        assert_eq!(
            legs.embed_pair(&xy, 0, 1),
            xy.super_kron(&[0, 1, 1, 0], &id, &p)
        );
        let p4: Vec<u8> = vec![0, 1, 1, 0];
        assert_eq!(legs.embed_pair(&xy, 1, 2), id.super_kron(&p, &xy, &p4));
        // x ⊗ 1 ⊗ y = (x ⊗ 1) ⊗ y in graded form
        let x1 = x.super_kron(&p, &id, &p);
        assert_eq!(legs.embed_pair(&xy, 0, 2), x1.super_kron(&p4, &y, &p));
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                q()
            } else {
                QScalar::from_int((i + 2 * j) as i64)
            }
        });
        let inv = m.inverse().unwrap();
        assert_eq!(m.times(&inv), QMatrix::identity(3));
    }
}
