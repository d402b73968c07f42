use std::fmt;
use std::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector {
    entries: Vec<Rational>,
}

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Rational::zero(); dim],
        }
    }

    pub fn ones(dim: usize) -> Self {
        Self {
            entries: vec![Rational::one(); dim],
        }
    }

    /// Standard basis vector `e_k` of length `dim`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = Rational::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self {
            entries: values
                .iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Indices of the nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn dot(&self, other: &Self) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot: dimension mismatch");
        let mut acc = Rational::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rational, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "axpy: dimension mismatch");
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| if b.is_zero() { a.clone() } else { a + c * b })
                .collect(),
        }
    }

    /// Positive rescaling with integer, coprime entries. The zero vector is
    /// returned unchanged.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .entries
            .iter()
            .map(|x| x.numer() * (&lcm / x.denom()))
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs();
        Self {
            entries: ints
                .into_iter()
                .map(|x| Rational::from_integer(x / &gcd))
                .collect(),
        }
    }

    /// Entries as machine integers, if every entry is an integer that fits.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries
            .iter()
            .map(|x| {
                if x.is_integer() {
                    i64::try_from(x.numer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.entries[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        self.axpy(&Rational::one(), rhs)
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        self.axpy(&-Rational::one(), rhs)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Kronecker product: entry `i * dim(v) + j` is `u_i * v_j`.
pub fn tensor_product(u: &RationalVector, v: &RationalVector) -> RationalVector {
    let mut entries = Vec::with_capacity(u.dim() * v.dim());
    for a in &u.entries {
        for b in &v.entries {
            if a.is_zero() || b.is_zero() {
                entries.push(Rational::zero());
            } else {
                entries.push(a * b);
            }
        }
    }
    RationalVector { entries }
}

/// Gram–Schmidt without normalization. Each output vector is rescaled to
/// coprime integer entries by a positive factor, so the first output is a
/// positive multiple of the first input.
pub fn orthogonalize(vs: &[RationalVector]) -> Result<Vec<RationalVector>> {
    let mut out: Vec<RationalVector> = Vec::with_capacity(vs.len());
    let mut norms: Vec<Rational> = Vec::with_capacity(vs.len());
    for (k, v) in vs.iter().enumerate() {
        if let Some(first) = vs.first() {
            if first.dim() != v.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "vector {k} has dim {}, expected {}",
                    v.dim(),
                    first.dim()
                )));
            }
        }
        let mut w = v.clone();
        for (u, n) in out.iter().zip(&norms) {
            let c = v.dot(u);
            if !c.is_zero() {
                w = w.axpy(&-(c / n), u);
            }
        }
        if w.is_zero() {
            return Err(Error::DependentInput(k));
        }
        let w = w.primitive();
        norms.push(w.norm_sq());
        out.push(w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RationalVector {
        RationalVector::from_ints(xs)
    }

    #[test]
    fn tensor_product_examples() {
        assert_eq!(
            tensor_product(&RationalVector::unit(3, 0), &RationalVector::unit(3, 1)),
            RationalVector::unit(9, 1)
        );
        assert_eq!(
            tensor_product(&v(&[1, 1, 0]), &v(&[0, 1, 1])),
            v(&[0, 1, 1, 0, 1, 1, 0, 0, 0])
        );
        assert_eq!(
            tensor_product(&RationalVector::ones(3), &RationalVector::ones(3)),
            RationalVector::ones(9)
        );
    }

    #[test]
    fn orthogonalize_examples() {
        assert_eq!(
            orthogonalize(&[v(&[1, 1]), v(&[1, 0])]).unwrap(),
            vec![v(&[1, 1]), v(&[1, -1])]
        );
        assert_eq!(
            orthogonalize(&[v(&[1, 1, 1]), v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap(),
            vec![v(&[1, 1, 1]), v(&[2, -1, -1]), v(&[0, 1, -1])]
        );
        assert_eq!(
            orthogonalize(&[v(&[3, 0, 5])]).unwrap(),
            vec![v(&[3, 0, 5])]
        );
    }

    #[test]
    fn orthogonalize_rejects_dependent_input() {
        assert_eq!(
            orthogonalize(&[v(&[1, 2]), v(&[2, 4])]),
            Err(Error::DependentInput(1))
        );
    }

    #[test]
    fn primitive_keeps_sign() {
        let x = RationalVector::new(vec![
            Rational::new((-2).into(), 3.into()),
            Rational::new(4.into(), 9.into()),
        ]);
        assert_eq!(x.primitive(), v(&[-3, 2]));
    }
}
