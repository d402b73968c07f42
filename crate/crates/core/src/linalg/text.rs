//! Exact-rational matrix text format.
//!
//! ```text
//! rmat <rows> <cols>
//! <num/den> <num/den> ...
//! ```
//!
//! One row per line, entries separated by single spaces, every entry
//! written as a reduced fraction with positive denominator (`0/1`, `-1/4`).
//! The parser also accepts bare integers.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{Rational, RationalMatrix};
use crate::error::{Error, Result};

pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

pub fn write_rmat(m: &RationalMatrix) -> String {
    let mut out = String::new();
    writeln!(out, "rmat {} {}", m.rows(), m.cols()).expect("string write");
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_rational).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_rmat(text: &str) -> Result<RationalMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let dims: Vec<&str> = header.split(' ').collect();
    let (rows, cols) = match dims.as_slice() {
        ["rmat", r, c] => (
            r.parse::<usize>().map_err(|e| parse_err(0, e))?,
            c.parse::<usize>().map_err(|e| parse_err(0, e))?,
        ),
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}"),
            })
        }
    };
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let entries: Vec<&str> = line.split(' ').collect();
        if entries.len() != cols {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected {cols} entries, found {}", entries.len()),
            });
        }
        for e in entries {
            data.push(parse_rational(e).ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("bad entry {e:?}"),
            })?);
        }
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Parse {
            line: seen + 1,
            msg: format!("expected {rows} rows, found {seen}"),
        });
    }
    RationalMatrix::from_vec(rows, cols, data)
}

fn parse_err(line: usize, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        line: line + 1,
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_reduced_fractions() {
        let m = RationalMatrix::from_vec(
            1,
            3,
            vec![
                Rational::new(82.into(), 360.into()),
                Rational::zero(),
                Rational::new((-8).into(), 360.into()),
            ],
        )
        .unwrap();
        assert_eq!(write_rmat(&m), "rmat 1 3\n41/180 0/1 -1/45\n");
    }

    #[test]
    fn parses_integers_and_rejects_garbage() {
        let m = parse_rmat("rmat 2 2\n1 -2/4\n0 3\n").unwrap();
        assert_eq!(m[(0, 1)], Rational::new((-1).into(), 2.into()));
        assert!(parse_rmat("rmat 2 2\n1 2\n").is_err());
        assert!(parse_rmat("rmat 1 2\n1 2/0\n").is_err());
        assert!(parse_rmat("matrix 1 1\n1\n").is_err());
        assert!(parse_rmat("rmat 1 2\n1  2\n").is_err());
    }
}
