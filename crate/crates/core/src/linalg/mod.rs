//! Exact dense linear algebra over the rationals.

mod charpoly;
mod elim;
mod matrix;
mod text;
mod vector;

pub use charpoly::{
    char_poly, is_psd, min_eig_bound, min_eig_bound_with_width, Interval, MIN_EIG_WIDTH,
};
pub use elim::{kernel_basis, rank, span_dim};
pub use matrix::RationalMatrix;
pub use text::{format_rational, parse_rational, parse_rmat, write_rmat};
pub use vector::{orthogonalize, tensor_product, RationalVector};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn int(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// `n / d`; panics on `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
