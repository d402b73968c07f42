use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    /// Position in the flat index `p·d² + q·d + r`.
    pub fn index(self) -> usize {
        self as usize
    }

    /// The other two parties, in A, B, C order.
    pub fn others(self) -> [Party; 2] {
        match self {
            Party::A => [Party::B, Party::C],
            Party::B => [Party::A, Party::C],
            Party::C => [Party::A, Party::B],
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Party::A => "A",
            Party::B => "B",
            Party::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "A" | "a" => Ok(Party::A),
            "B" | "b" => Ok(Party::B),
            "C" | "c" => Ok(Party::C),
            _ => Err(Error::InvalidArgument(format!("unknown party {s:?}"))),
        }
    }
}

/// A split of {A, B, C} into one party against the other two, named by the
/// lone party: `SplitA` is A|BC, `SplitB` is AC|B, `SplitC` is AB|C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bipartition {
    #[serde(rename = "A|BC")]
    SplitA,
    #[serde(rename = "AC|B")]
    SplitB,
    #[serde(rename = "AB|C")]
    SplitC,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [
        Bipartition::SplitA,
        Bipartition::SplitB,
        Bipartition::SplitC,
    ];

    pub fn single(self) -> Party {
        match self {
            Bipartition::SplitA => Party::A,
            Bipartition::SplitB => Party::B,
            Bipartition::SplitC => Party::C,
        }
    }

    pub fn pair(self) -> [Party; 2] {
        self.single().others()
    }

    pub fn of_single(p: Party) -> Self {
        match p {
            Party::A => Bipartition::SplitA,
            Party::B => Bipartition::SplitB,
            Party::C => Bipartition::SplitC,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Bipartition::SplitA => "A|BC",
            Bipartition::SplitB => "AC|B",
            Bipartition::SplitC => "AB|C",
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let norm: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        match norm.as_str() {
            "A|BC" | "BC|A" | "A" => Ok(Bipartition::SplitA),
            "AC|B" | "CA|B" | "B|AC" | "B|CA" | "B" => Ok(Bipartition::SplitB),
            "AB|C" | "C|AB" | "C" => Ok(Bipartition::SplitC),
            _ => Err(Error::InvalidArgument(format!("unknown cut {s:?}"))),
        }
    }
}

/// Splits a flat index over `d³` into `(p, q, r)`.
pub fn split_index(d: usize, idx: usize) -> [usize; 3] {
    [idx / (d * d), (idx / d) % d, idx % d]
}

/// `p·d² + q·d + r`.
pub fn flat_index(d: usize, [p, q, r]: [usize; 3]) -> usize {
    p * d * d + q * d + r
}

/// Row/column coordinates of a tripartite index in the reshape across
/// `cut`: the lone party indexes rows, the pair (in A, B, C order) columns.
pub fn cut_coords(d: usize, cut: Bipartition, idx: usize) -> (usize, usize) {
    let t = split_index(d, idx);
    let [x, y] = cut.pair();
    (t[cut.single().index()], t[x.index()] * d + t[y.index()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cuts_parse_in_all_spellings() {
        for cut in Bipartition::ALL {
            assert_eq!(cut.name().parse::<Bipartition>().unwrap(), cut);
        }
        assert_eq!("ab|c".parse::<Bipartition>().unwrap(), Bipartition::SplitC);
        assert!("AB|CD".parse::<Bipartition>().is_err());
    }

    #[test]
    fn index_round_trip() {
        for idx in 0..64 {
            assert_eq!(flat_index(4, split_index(4, idx)), idx);
        }
        assert_eq!(
            cut_coords(3, Bipartition::SplitB, flat_index(3, [2, 1, 0])),
            (1, 6)
        );
    }
}
