//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Zero};
use ubbcert::linalg::{parse_rmat, Rational, RationalMatrix};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> RationalMatrix {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_rmat(&text).expect("fixture parses")
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn rank_oracle(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                let pivot = a[rank].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Characteristic polynomial `det(λI − M)`, leading coefficient first, by
/// the Faddeev–LeVerrier recurrence.
pub fn faddeev_leverrier(m: &RationalMatrix) -> Vec<Rational> {
    let n = m.rows();
    let mut coeffs = vec![Rational::one()];
    let mut mk = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{k−1} I
        let mut next = m.mul(&mk).unwrap();
        let c_prev = coeffs[k - 1].clone();
        for i in 0..n {
            next[(i, i)] += &c_prev;
        }
        mk = next;
        let c = -(m.mul(&mk).unwrap().trace()) / Rational::from_integer((k as i64).into());
        coeffs.push(c);
    }
    coeffs
}

/// `Tr_party` of a `d³ × d³` matrix by explicit index loops; the kept parties
/// stay in A, B, C order.
pub fn partial_trace_oracle(m: &RationalMatrix, d: usize, party: usize) -> RationalMatrix {
    let flat = |t: [usize; 3]| t[0] * d * d + t[1] * d + t[2];
    let kept: Vec<usize> = (0..3).filter(|&p| p != party).collect();
    let mut out = RationalMatrix::zeros(d * d, d * d);
    for x in 0..d {
        for y in 0..d {
            for x2 in 0..d {
                for y2 in 0..d {
                    let mut acc = Rational::zero();
                    for k in 0..d {
                        let mut i = [0; 3];
                        let mut j = [0; 3];
                        i[party] = k;
                        j[party] = k;
                        i[kept[0]] = x;
                        i[kept[1]] = y;
                        j[kept[0]] = x2;
                        j[kept[1]] = y2;
                        acc += &m[(flat(i), flat(j))];
                    }
                    out[(x * d + y, x2 * d + y2)] = acc;
                }
            }
        }
    }
    out
}

/// Evaluates a leading-first polynomial at `x`.
pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().fold(Rational::zero(), |acc, c| acc * x + c)
}
