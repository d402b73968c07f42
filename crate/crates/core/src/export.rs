//! Text formats for state sets and the files written by `export`.
//!
//! A state set starts with a header line `# d=<d> set=<name>` and then
//! holds one state per line:
//!
//! ```text
//! <label> : <flat index>=<num>/<den>,<flat index>=<num>/<den>,...
//! ```
//!
//! Only nonzero coefficients are listed, in ascending index order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::Zero;

use crate::analysis::{bimarginal, partial_transpose, SubspaceProjector};
use crate::basis::BasisSet;
use crate::cube::TripartiteState;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, parse_rational, write_rmat, Rational, RationalVector};
use crate::parties::Bipartition;

#[derive(Clone, Debug)]
pub struct StateSetFile {
    pub d: usize,
    /// Everything after `d=<d> ` on the header line.
    pub tag: String,
    pub states: Vec<TripartiteState>,
}

pub fn set_tag(set: &BasisSet) -> String {
    match set.cut() {
        Some(c) => format!("set={} cut={c}", set.kind.set_name()),
        None => format!("set={}", set.kind.set_name()),
    }
}

pub fn write_state_set(set: &BasisSet) -> String {
    write_states(set.d, &set_tag(set), &set.states)
}

pub fn write_states(d: usize, tag: &str, states: &[TripartiteState]) -> String {
    let mut out = format!("# d={d} {tag}\n");
    for s in states {
        let terms: Vec<String> = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| format!("{i}={}", format_rational(x)))
            .collect();
        writeln!(out, "{} : {}", s.label(), terms.join(",")).expect("string write");
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_state_set(text: &str) -> Result<StateSetFile> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let rest = header
        .strip_prefix("# d=")
        .ok_or_else(|| perr(1, "expected header `# d=<d> ...`"))?;
    let (d_str, tag) = rest.split_once(' ').unwrap_or((rest, ""));
    let d: usize = d_str
        .parse()
        .map_err(|_| perr(1, format!("bad dimension {d_str:?}")))?;
    let n = d
        .checked_pow(3)
        .ok_or_else(|| perr(1, "dimension too large"))?;
    let mut states = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, body) = line
            .rsplit_once(" : ")
            .ok_or_else(|| perr(lineno, "expected `label : index=coeff,...`"))?;
        let mut coeffs = vec![Rational::zero(); n];
        if !body.is_empty() {
            for term in body.split(',') {
                let (idx, c) = term
                    .split_once('=')
                    .ok_or_else(|| perr(lineno, format!("bad term {term:?}")))?;
                let idx: usize = idx
                    .parse()
                    .map_err(|_| perr(lineno, format!("bad index {idx:?}")))?;
                if idx >= n {
                    return Err(perr(lineno, format!("index {idx} out of range for d={d}")));
                }
                coeffs[idx] = parse_rational(c)
                    .ok_or_else(|| perr(lineno, format!("bad coefficient {c:?}")))?;
            }
        }
        states.push(TripartiteState::new(d, RationalVector::new(coeffs), label)?);
    }
    Ok(StateSetFile {
        d,
        tag: tag.to_string(),
        states,
    })
}

/// Writes `text` to `dir/name`, creating `dir`.
pub fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let io = |path: &Path, e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| io(&path, e))?;
    Ok(path)
}

/// Two-party side of a cut, as used in file names (`BC`, `AC`, `AB`).
pub fn pair_name(cut: Bipartition) -> String {
    cut.pair().iter().map(|p| p.to_string()).collect()
}

/// Matrices written by `export`: projector, density, the three bimarginals
/// of the density and its three partial transposes. Returns `(file name,
/// contents)` pairs.
pub fn projector_files(p: &SubspaceProjector) -> Result<Vec<(String, String)>> {
    let mut files = vec![("projector.rmat".to_string(), write_rmat(&p.matrix))];
    if p.rank == 0 {
        return Ok(files);
    }
    let rho = p.density()?;
    files.push(("density.rmat".into(), write_rmat(&rho)));
    for cut in Bipartition::ALL {
        let m = bimarginal(&rho, p.d, cut)?;
        files.push((format!("marginal_{}.rmat", pair_name(cut)), write_rmat(&m)));
    }
    for cut in Bipartition::ALL {
        let m = partial_transpose(&rho, cut, p.d)?;
        files.push((format!("pt_{}.rmat", cut.single()), write_rmat(&m)));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_asymmetric_ubb, build_upb};

    #[test]
    fn state_set_round_trip() {
        let set = build_asymmetric_ubb(3, Bipartition::SplitC).unwrap();
        let text = write_state_set(&set);
        assert!(text.starts_with("# d=3 set=ubb-asym cut=AB|C\n"));
        assert_eq!(text.lines().count(), 24);
        let parsed = parse_state_set(&text).unwrap();
        assert_eq!(parsed.d, 3);
        assert_eq!(write_states(parsed.d, &parsed.tag, &parsed.states), text);
        for (a, b) in parsed.states.iter().zip(&set.states) {
            assert_eq!(a.coeffs(), b.coeffs());
            assert_eq!(a.label(), b.label());
        }
    }

    #[test]
    fn state_lines() {
        let text = write_state_set(&build_upb(3).unwrap());
        let last = text.lines().last().unwrap();
        let expected: Vec<String> = (0..27).map(|i| format!("{i}=1/1")).collect();
        assert_eq!(last, format!("S : {}", expected.join(",")));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_state_set(""),
            Err(Error::Parse { line: 1, .. })
        ));
        let bad = "# d=3 set=upb\nx : 27=1/1\n";
        assert!(matches!(
            parse_state_set(bad),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad = "# d=3 set=upb\nx : 0=1/0\n";
        assert!(matches!(
            parse_state_set(bad),
            Err(Error::Parse { line: 2, .. })
        ));
        let bad = "# d=3 set=upb\nno separator\n";
        assert!(matches!(
            parse_state_set(bad),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
