//! Certificates for unextendibility, genuine entanglement and the
//! missing-state rank facts.

mod claims;
mod facts;
mod sampling;
mod seesaw;

pub use claims::{
    asymmetric_lemma_certificate, biseparable_search_certificate, entanglement_deficit,
    positive_control_certificate, ppt_certificate, product_search_certificate, prop1_certificate,
    prop2_certificate, prop3_certificate, theorem1_certificate, POSITIVE_CONTROL_GAP,
};
pub use facts::{
    ges_combination, verify_fact_i, verify_fact_ii, verify_fact_iii, verify_fact_iv,
    verify_theorem1_sampled,
};
pub use sampling::{random_rational, sub_rng};
pub use seesaw::{
    biseparable_overlap_search, product_overlap_search, rationalize, SearchOutcome, SeesawConfig,
};

use num_traits::Zero;
use serde::Serialize;

use crate::cube::TripartiteState;
use crate::error::{Error, Result};
use crate::linalg::{rank, RationalMatrix, RationalVector};
use crate::parties::{cut_coords, Bipartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    StructuralExact,
    ExhaustiveExact,
    /// Exact checks on randomly sampled rational instances.
    SampledExact,
    RandomizedNumerical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub d: usize,
    pub method: Method,
    pub verdict: Verdict,
    pub witness: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// What was and was not covered.
    pub scope: String,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Rank of the `d × d²` coefficient reshape of `v` across `cut`.
pub fn reshape_rank(v: &RationalVector, d: usize, cut: Bipartition) -> Result<usize> {
    if v.dim() != d * d * d {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for d={d}",
            v.dim()
        )));
    }
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut m = RationalMatrix::zeros(d, d * d);
    for (idx, x) in v.iter().enumerate() {
        if !x.is_zero() {
            m[cut_coords(d, cut, idx)] = x.clone();
        }
    }
    Ok(rank(&m))
}

pub fn schmidt_rank(v: &TripartiteState, cut: Bipartition) -> Result<usize> {
    reshape_rank(v.coeffs(), v.d(), cut)
}

/// Schmidt rank at least 2 across every cut.
pub fn genuine_entanglement_check(v: &TripartiteState) -> Result<bool> {
    is_genuinely_entangled(v.coeffs(), v.d())
}

pub fn is_genuinely_entangled(v: &RationalVector, d: usize) -> Result<bool> {
    for cut in Bipartition::ALL {
        if reshape_rank(v, d, cut)? < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_symmetric_ubb;
    use crate::cube::build_topb;
    use crate::linalg::int;

    fn ghz(d: usize, k: usize) -> TripartiteState {
        let mut s = TripartiteState::basis(d, 0, 0, 0);
        for j in 1..k {
            s = s.combine(&int(1), &TripartiteState::basis(d, j, j, j), &int(1), "ghz");
        }
        s
    }

    #[test]
    fn schmidt_rank_examples() {
        for cut in Bipartition::ALL {
            assert_eq!(schmidt_rank(&ghz(3, 2), cut).unwrap(), 2);
        }
        for s in build_topb(4).unwrap().states() {
            for cut in Bipartition::ALL {
                assert_eq!(schmidt_rank(s, cut).unwrap(), 1);
            }
        }
        let ubb = build_symmetric_ubb(3).unwrap();
        let psi12 = &ubb.appended()[0];
        assert_eq!(psi12.label(), "psi-^(1)_12");
        assert_eq!(schmidt_rank(psi12, Bipartition::SplitC).unwrap(), 1);
        assert_eq!(schmidt_rank(psi12, Bipartition::SplitA).unwrap(), 2);
        let zero = TripartiteState::new(3, RationalVector::zeros(27), "0").unwrap();
        assert_eq!(
            schmidt_rank(&zero, Bipartition::SplitA),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn genuine_entanglement_examples() {
        assert!(genuine_entanglement_check(&ghz(3, 3)).unwrap());
        let ubb = build_symmetric_ubb(3).unwrap();
        let psi34 = &ubb.appended()[1];
        assert_eq!(psi34.label(), "psi-^(1)_34");
        assert!(!genuine_entanglement_check(psi34).unwrap());
        assert_eq!(schmidt_rank(psi34, Bipartition::SplitB).unwrap(), 1);
    }
}
