use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, RationalVector};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_rows(rows: &[RationalVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, RationalVector::dim);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.dim()
                )));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_ints(rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            values
                .iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect(),
        )
    }

    /// `diag(values)`.
    pub fn diagonal(values: &[Rational]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in values.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    /// `v v^T`.
    pub fn outer(v: &RationalVector) -> Self {
        let n = v.dim();
        let mut m = Self::zeros(n, n);
        let support = v.support();
        for &i in &support {
            for &j in &support {
                m.data[i * n + j] = &v[i] * &v[j];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RationalVector {
        RationalVector::new(self.row(i).to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (i + 1..self.cols)
                    .all(|j| self.data[i * self.cols + j] == self.data[j * self.cols + i])
            })
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| &self.data[i * self.cols + i])
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn checked_div_scalar(&self, c: &Rational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&c.recip()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// `self -= c * v v^T`, touching only the support of `v`.
    pub fn sub_scaled_outer(&mut self, c: &Rational, v: &RationalVector) {
        assert!(self.is_square() && self.rows == v.dim());
        let support = v.support();
        for &i in &support {
            let ci = c * &v[i];
            for &j in &support {
                let idx = i * self.cols + j;
                self.data[idx] -= &ci * &v[j];
            }
        }
    }

    /// Exact product. Both operands are brought to a common integer scale so
    /// the inner loops run over big integers rather than rationals.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, da) = self.to_integer();
        let (b, db) = other.to_integer();
        let denom = Rational::from_integer(da * db);
        let mut data = Vec::with_capacity(self.rows * other.cols);
        let mut acc = vec![BigInt::zero(); other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| x.set_zero());
            for k in 0..self.cols {
                let aik = &a[i * self.cols + k];
                if aik.is_zero() {
                    continue;
                }
                let brow = &b[k * other.cols..(k + 1) * other.cols];
                for (x, bkj) in acc.iter_mut().zip(brow) {
                    if !bkj.is_zero() {
                        *x += aik * bkj;
                    }
                }
            }
            data.extend(
                acc.iter()
                    .map(|x| Rational::from_integer(x.clone()) / &denom),
            );
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vector(&self, v: &RationalVector) -> Result<RationalVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        Ok(RationalVector::new(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.iter())
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        ))
    }

    /// Returns `(A, D)` with `self = A / D`, `A` integral and `D > 0` the
    /// least common denominator of all entries.
    pub fn to_integer(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints = self
            .data
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        (ints, lcm)
    }

    /// Rows rescaled independently to integers; preserves row space.
    pub(crate) fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
            })
            .collect()
    }

    /// Entrywise conversion to floating point.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.data
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}
