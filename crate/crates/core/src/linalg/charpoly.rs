//! Exact characteristic polynomials and spectral sign certificates.
//!
//! The characteristic polynomial of an integer matrix is computed modulo a
//! set of 62-bit primes (Hessenberg reduction over each prime field) and
//! lifted by Chinese remaindering. The number of primes is chosen from a
//! Hadamard-type bound on every coefficient, so the lift is exact.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

/// Coefficients of `det(λI − M)`, leading coefficient first: `c[0] = 1`,
/// `c[k]` multiplies `λ^(n−k)`.
pub fn char_poly(m: &RationalMatrix) -> Result<Vec<Rational>> {
    let (ints, denom) = integer_char_poly(m)?;
    // charpoly(A / D) has c_k(A) / D^k.
    let mut scale = BigInt::one();
    Ok(ints
        .into_iter()
        .map(|c| {
            let r = Rational::new(c, scale.clone());
            scale *= &denom;
            r
        })
        .collect())
}

/// Characteristic polynomial of the integer matrix `D·M` together with `D`.
fn integer_char_poly(m: &RationalMatrix) -> Result<(Vec<BigInt>, BigInt)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (a, d) = m.to_integer();
    Ok((integer_matrix_char_poly(&a, m.rows()), d))
}

pub(crate) fn integer_matrix_char_poly(a: &[BigInt], n: usize) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let bound_bits = coefficient_bound_bits(a, n);
    // Each prime exceeds 2^61; the product must exceed twice the bound.
    let needed = (bound_bits + 2).div_ceil(61);
    let primes = primes(needed);
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut modulus = BigInt::one();
    for &p in primes.iter() {
        let reduced: Vec<u64> = a.iter().map(|x| reduce(x, p)).collect();
        let residues = char_poly_mod(&reduced, n, p);
        let mp = reduce(&modulus, p);
        let inv = inv_mod(mp, p);
        for (x, &r) in acc.iter_mut().zip(&residues) {
            let xm = reduce(x, p);
            let t = mul_mod(sub_mod(r, xm, p), inv, p);
            if t != 0 {
                *x += &modulus * BigInt::from(t);
            }
        }
        modulus *= BigInt::from(p);
    }
    let half = &modulus >> 1;
    acc.into_iter()
        .map(|x| if x > half { x - &modulus } else { x })
        .collect()
}

/// log2 upper bound on the absolute value of every coefficient of the
/// characteristic polynomial. `c_k` is a signed sum of `C(n,k)` principal
/// minors, each bounded by the product of its (full) row norms.
fn coefficient_bound_bits(a: &[BigInt], n: usize) -> usize {
    let mut row_bits: Vec<f64> = (0..n)
        .map(|i| {
            let s: BigInt = a[i * n..(i + 1) * n].iter().map(|x| x * x).sum();
            // |row| = sqrt(s) < 2^(bits(s)/2)
            s.bits() as f64 / 2.0
        })
        .collect();
    row_bits.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    let mut best = 0.0_f64;
    let mut minors = 0.0_f64;
    let mut log_binom = 0.0_f64;
    for k in 1..=n {
        minors += row_bits[k - 1];
        log_binom += ((n - k + 1) as f64).log2() - (k as f64).log2();
        best = best.max(minors + log_binom);
    }
    best.ceil() as usize + 1
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().expect("residue fits");
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Characteristic polynomial over GF(p), coefficients leading-first.
fn char_poly_mod(a: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut h = a.to_vec();
    let at = |i: usize, j: usize| i * n + j;
    // Similarity reduction to upper Hessenberg form.
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[at(i, m - 1)] != 0) else {
            continue;
        };
        if i != m {
            for k in 0..n {
                h.swap(at(i, k), at(m, k));
            }
            for k in 0..n {
                h.swap(at(k, i), at(k, m));
            }
        }
        let inv = inv_mod(h[at(m, m - 1)], p);
        for j in m + 1..n {
            let u = mul_mod(h[at(j, m - 1)], inv, p);
            if u == 0 {
                continue;
            }
            for k in 0..n {
                let v = mul_mod(u, h[at(m, k)], p);
                h[at(j, k)] = sub_mod(h[at(j, k)], v, p);
            }
            for k in 0..n {
                let v = mul_mod(u, h[at(k, j)], p);
                h[at(k, m)] = add_mod(h[at(k, m)], v, p);
            }
        }
    }
    // polys[m] is the char poly of the leading m x m block, low degree first.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let hmm = h[at(m - 1, m - 1)];
        let prev = &polys[m - 1];
        let mut next = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = add_mod(next[k + 1], c, p);
            next[k] = sub_mod(next[k], mul_mod(hmm, c, p), p);
        }
        let mut t = 1u64;
        for i in 1..m {
            // 1-based: t *= h[m-i+1, m-i]; subtract t * h[m-i, m] * p_{m-i-1}
            t = mul_mod(t, h[at(m - i, m - i - 1)], p);
            if t == 0 {
                break;
            }
            let coef = mul_mod(t, h[at(m - i - 1, m - 1)], p);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                next[k] = sub_mod(next[k], mul_mod(coef, c, p), p);
            }
        }
        polys.push(next);
    }
    let mut out = polys.pop().expect("n >= 1");
    out.reverse();
    out
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes below 2^62, descending.
fn primes(count: usize) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut cache = cache.lock().expect("prime cache poisoned");
    let mut candidate = cache.last().map_or((1u64 << 62) - 1, |&p| p - 2);
    while cache.len() < count {
        if is_prime(candidate) {
            cache.push(candidate);
        }
        candidate -= 2;
    }
    cache[..count].to_vec()
}

/// Exact positive-semidefiniteness test for a symmetric matrix.
///
/// All eigenvalues are real, so `M ⪰ 0` iff the coefficients of
/// `det(λI − M)` alternate in sign: `(−1)^k c_k ≥ 0` for every `k`.
pub fn is_psd(m: &RationalMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let (coeffs, _) = integer_char_poly(m)?;
    Ok(alternates(&coeffs))
}

fn alternates(coeffs: &[BigInt]) -> bool {
    coeffs.iter().enumerate().all(|(k, c)| {
        if k % 2 == 0 {
            !c.is_negative()
        } else {
            !c.is_positive()
        }
    })
}

/// Closed interval of floats enclosing an exact value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Default enclosure width for [`min_eig_bound`].
pub const MIN_EIG_WIDTH: f64 = 1e-9;

/// Rigorous enclosure of the smallest eigenvalue of a symmetric matrix,
/// at most [`MIN_EIG_WIDTH`] wide.
pub fn min_eig_bound(m: &RationalMatrix) -> Result<Interval> {
    min_eig_bound_with_width(m, &Rational::new(1.into(), 1_000_000_000.into()))
}

/// As [`min_eig_bound`] with an explicit (rational) target width.
///
/// Bisection on the predicate "every eigenvalue is ≥ x", decided exactly:
/// for the real-rooted `p(λ) = det(λI − M)`, Descartes' rule of signs is
/// exact, so the number of roots above `x` equals the sign variations of
/// the coefficients of `p(t + x)` and the root count at `x` is the number of
/// trailing zero coefficients.
pub fn min_eig_bound_with_width(m: &RationalMatrix, width: &Rational) -> Result<Interval> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "empty matrix has no eigenvalues".into(),
        ));
    }
    let (coeffs, denom) = integer_char_poly(m)?;
    let psd = alternates(&coeffs);

    // Gershgorin gives a lower bound; the smallest diagonal entry (a Rayleigh
    // quotient) an upper bound.
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for i in 0..n {
        let diag = &m[(i, i)];
        let radius = (0..n)
            .filter(|&j| j != i)
            .fold(Rational::zero(), |acc, j| acc + m[(i, j)].abs());
        let g = diag - radius;
        if lo.as_ref().is_none_or(|l| &g < l) {
            lo = Some(g);
        }
        if hi.as_ref().is_none_or(|h| diag < h) {
            hi = Some(diag.clone());
        }
    }
    let mut lo = lo.expect("n > 0");
    let mut hi = hi.expect("n > 0");
    if psd {
        if lo.is_negative() {
            lo = Rational::zero();
        }
    } else if !hi.is_negative() {
        hi = Rational::zero();
    }
    let two = Rational::from_integer(2.into());
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        if all_roots_at_least(&coeffs, &denom, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Interval {
        lo: round_down(&lo),
        hi: round_up(&hi),
    })
}

/// `true` iff every root of the char poly of `A/D` (given by the integer
/// char poly of `A`) is `≥ x`.
fn all_roots_at_least(coeffs: &[BigInt], denom: &BigInt, x: &Rational) -> bool {
    let n = coeffs.len() - 1;
    // Roots of q(v) = Σ c_k b^k v^(n−k) are b·λ_A where x = a/b.
    let b = x.denom();
    let mut scale = BigInt::one();
    let mut q: Vec<BigInt> = Vec::with_capacity(n + 1);
    for c in coeffs {
        q.push(c * &scale);
        scale *= b;
    }
    // Shift by b·(D·x) = D·a so roots become b·D·(λ − x).
    let shift = denom * x.numer();
    taylor_shift(&mut q, &shift);
    let zeros = q.iter().rev().take_while(|c| c.is_zero()).count();
    let mut variations = 0;
    let mut last: Option<Sign> = None;
    for c in &q {
        let s = c.sign();
        if s == Sign::NoSign {
            continue;
        }
        if last.is_some_and(|l| l != s) {
            variations += 1;
        }
        last = Some(s);
    }
    variations + zeros == n
}

/// In place `q(v) ← q(v + s)` for leading-first coefficients.
fn taylor_shift(q: &mut [BigInt], s: &BigInt) {
    if s.is_zero() {
        return;
    }
    let n = q.len();
    for i in 0..n {
        for j in 1..n - i {
            let t = &q[j - 1] * s;
            q[j] += t;
        }
    }
}

fn round_down(x: &Rational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::NEG_INFINITY);
    while f.is_finite() && Rational::from_float(f).is_some_and(|r| &r > x) {
        f = f.next_down();
    }
    f
}

fn round_up(x: &Rational) -> f64 {
    let mut f = x.to_f64().unwrap_or(f64::INFINITY);
    while f.is_finite() && Rational::from_float(f).is_some_and(|r| &r < x) {
        f = f.next_up();
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: usize, xs: &[i64]) -> RationalMatrix {
        RationalMatrix::from_ints(rows, xs.len() / rows, xs).unwrap()
    }

    fn r(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly(&ints(2, &[1, 0, 0, 2])).unwrap(),
            vec![r(1), r(-3), r(2)]
        );
        assert_eq!(
            char_poly(&RationalMatrix::zeros(4, 4)).unwrap(),
            vec![r(1), r(0), r(0), r(0), r(0)]
        );
        assert_eq!(
            char_poly(&ints(2, &[0, 1, 1, 0])).unwrap(),
            vec![r(1), r(0), r(-1)]
        );
    }

    #[test]
    fn char_poly_rejects_non_square() {
        assert!(matches!(
            char_poly(&RationalMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn char_poly_needs_hessenberg_pivoting() {
        // zero sub-diagonal entries force row/column swaps
        let m = ints(3, &[1, 2, 3, 0, 4, 5, 0, 6, 7]);
        // (λ-1)((λ-4)(λ-7) - 30) = λ^3 - 12λ^2 + 9λ + 2
        assert_eq!(char_poly(&m).unwrap(), vec![r(1), r(-12), r(9), r(2)]);
        let m = ints(3, &[0, 0, 1, 0, 0, 0, 1, 0, 0]);
        assert_eq!(char_poly(&m).unwrap(), vec![r(1), r(0), r(-1), r(0)]);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&ints(3, &[1, 0, 0, 0, 0, 0, 0, 0, 2])).unwrap());
        assert!(!is_psd(&ints(2, &[0, 1, 1, 0])).unwrap());
        assert_eq!(is_psd(&ints(2, &[0, 1, 2, 0])), Err(Error::NotSymmetric));
    }

    #[test]
    fn min_eig_examples() {
        let i = min_eig_bound(&RationalMatrix::identity(3)).unwrap();
        assert_eq!((i.lo, i.hi), (1.0, 1.0));
        let i = min_eig_bound(&ints(2, &[0, 1, 1, 0])).unwrap();
        assert!(i.contains(-1.0));
        assert!(i.width() <= 1e-9);
        assert_eq!(
            min_eig_bound(&ints(2, &[0, 1, 0, 0])),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn primes_are_prime_and_large() {
        let ps = primes(5);
        assert_eq!(ps.len(), 5);
        assert!(ps.iter().all(|&p| p > 1 << 61 && is_prime(p)));
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(!is_prime(1 << 61));
        assert!(is_prime((1 << 61) - 1));
    }
}
