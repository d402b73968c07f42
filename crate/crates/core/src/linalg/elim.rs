//! Elimination kernels: fraction-free rank and exact null spaces.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Rational, RationalMatrix, RationalVector};

/// Exact rank by Bareiss fraction-free elimination.
///
/// Rows are first rescaled to integers (row scaling does not change rank);
/// every intermediate division by the previous pivot is then exact.
pub fn rank(m: &RationalMatrix) -> usize {
    let mut a = m.integer_rows();
    bareiss_rank(&mut a)
}

pub(crate) fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let rj = &pivot_row[j];
                let x = &mut row[j];
                if lead.is_zero() || rj.is_zero() {
                    if x.is_zero() {
                        continue;
                    }
                    *x = &*x * pivot / &prev;
                } else {
                    *x = (&*x * pivot - &lead * rj) / &prev;
                }
            }
        }
        prev = pivot_row[c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form over the rationals. Returns the reduced rows
/// (only the nonzero ones) and their pivot columns.
fn rref(m: &RationalMatrix) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let cols = m.cols();
    let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r][c..].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let (before, after) = rows.split_at_mut(r);
        let (pivot_row, after) = after.split_first_mut().expect("pivot row");
        for row in before.iter_mut().chain(after.iter_mut()) {
            let f = std::mem::take(&mut row[c]);
            if f.is_zero() {
                continue;
            }
            for j in c + 1..cols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A basis of the right null space `{x : M x = 0}`, one vector per free
/// column, each rescaled to coprime integers.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<RationalVector> {
    let cols = m.cols();
    let (rows, pivots) = rref(m);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            RationalVector::new(x).primitive()
        })
        .collect()
}

/// Dimension of the span of `vs`.
pub fn span_dim(vs: &[RationalVector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    RationalMatrix::from_rows(vs).map_or(0, |m| rank(&m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_and_zero() {
        assert_eq!(rank(&RationalMatrix::identity(9)), 9);
        assert_eq!(rank(&RationalMatrix::zeros(4, 7)), 0);
    }

    #[test]
    fn rank_with_skipped_columns() {
        let m = RationalMatrix::from_ints(3, 4, &[0, 1, 2, 3, 0, 2, 4, 6, 0, 0, 1, 1]).unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RationalMatrix::identity(4)).is_empty());
        let k = kernel_basis(&RationalMatrix::zeros(3, 3));
        assert_eq!(k.len(), 3);
        assert_eq!(span_dim(&k), 3);
        let m = RationalMatrix::from_ints(2, 3, &[1, 1, 1, 0, 1, -1]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k, vec![RationalVector::from_ints(&[-2, 1, 1])]);
        assert!(m.mul_vector(&k[0]).unwrap().is_zero());
    }
}
