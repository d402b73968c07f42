//! Complement projectors, partial traces and transposes, rank profiles and
//! per-cut PPT verdicts.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisKind, BasisSet};
use crate::error::{Error, Result};
use crate::linalg::{
    is_psd, kernel_basis, min_eig_bound, orthogonalize, rank, span_dim, Interval, Rational,
    RationalMatrix, RationalVector,
};
use crate::parties::{Bipartition, Party};

/// Exact orthogonal projector on `(C^d)^{⊗3}`.
#[derive(Clone, Debug)]
pub struct SubspaceProjector {
    pub d: usize,
    pub matrix: RationalMatrix,
    pub rank: usize,
    /// Set whose complement this projects onto; `None` for spans.
    pub source: Option<BasisKind>,
}

impl SubspaceProjector {
    /// `ρ = ℙ / rank`.
    pub fn density(&self) -> Result<RationalMatrix> {
        if self.rank == 0 {
            return Err(Error::DivisionByZero);
        }
        self.matrix
            .checked_div_scalar(&Rational::from_integer(self.rank.into()))
    }

    /// Projector onto the span of arbitrary (possibly dependent) vectors.
    pub fn onto_span(d: usize, vectors: &[RationalVector]) -> Result<Self> {
        let n = d * d * d;
        if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for d={d}",
                v.dim()
            )));
        }
        let basis = independent_orthogonal(vectors)?;
        let mut matrix = RationalMatrix::zeros(n, n);
        for v in &basis {
            let c = -v.norm_sq().recip();
            matrix.sub_scaled_outer(&c, v);
        }
        Ok(Self {
            d,
            rank: basis.len(),
            matrix,
            source: None,
        })
    }

    pub fn identity(d: usize) -> Self {
        let n = d * d * d;
        Self {
            d,
            matrix: RationalMatrix::identity(n),
            rank: n,
            source: None,
        }
    }

    pub fn is_idempotent(&self) -> bool {
        self.matrix
            .mul(&self.matrix)
            .is_ok_and(|sq| sq == self.matrix)
    }
}

fn independent_orthogonal(vectors: &[RationalVector]) -> Result<Vec<RationalVector>> {
    let mut kept: Vec<RationalVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &kept {
            let c = -(w.dot(u) / u.norm_sq());
            w = w.axpy(&c, u);
        }
        if !w.is_zero() {
            kept.push(w.primitive());
        }
    }
    // Re-run the exact Gram–Schmidt to normalise the representation.
    orthogonalize(&kept)
}

/// `ℙ = I − Σ |ψ⟩⟨ψ| / ⟨ψ|ψ⟩` over the states of `b`.
pub fn complement_projector(b: &BasisSet) -> Result<SubspaceProjector> {
    b.check_orthogonal()?;
    let n = b.d.pow(3);
    let mut matrix = RationalMatrix::identity(n);
    for s in &b.states {
        let c = s.norm_sq().recip();
        matrix.sub_scaled_outer(&c, s.coeffs());
    }
    let rank = n - b.len();
    debug_assert_eq!(matrix.trace(), Rational::from_integer(rank.into()));
    Ok(SubspaceProjector {
        d: b.d,
        matrix,
        rank,
        source: Some(b.kind),
    })
}

/// Integer basis of the orthogonal complement of `b`'s span.
pub fn complement_basis(b: &BasisSet) -> Result<Vec<RationalVector>> {
    if b.is_empty() {
        return Ok((0..b.d.pow(3))
            .map(|k| RationalVector::unit(b.d.pow(3), k))
            .collect());
    }
    Ok(kernel_basis(&RationalMatrix::from_rows(&b.vectors())?))
}

/// Number of parties (2 or 3) of a square matrix over `(C^d)^{⊗k}`.
fn party_count(m: &RationalMatrix, d: usize) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    match m.rows() {
        n if n == d * d * d => Ok(3),
        n if n == d * d => Ok(2),
        n => Err(Error::DimensionMismatch(format!(
            "{n}x{n} is neither d^2 nor d^3 for d={d}"
        ))),
    }
}

/// Traces out one party. Tripartite inputs (`d³×d³`) give a `d²×d²` matrix on
/// the remaining two parties in A, B, C order. Bipartite inputs (`d²×d²`)
/// name their factors A and B and give a `d×d` matrix.
pub fn partial_trace(m: &RationalMatrix, d: usize, traced: Party) -> Result<RationalMatrix> {
    let parties = party_count(m, d)?;
    if parties == 2 && traced == Party::C {
        return Err(Error::DimensionMismatch(
            "a bipartite matrix has no party C".into(),
        ));
    }
    let t = traced.index();
    let out_dim = d.pow(parties as u32 - 1);
    let mut out = RationalMatrix::zeros(out_dim, out_dim);
    // Position of `traced` among the factors, counted from the right.
    let stride = d.pow((parties - 1 - t) as u32);
    let high = stride * d;
    let compose = |rest: usize, k: usize| (rest / stride) * high + k * stride + rest % stride;
    for i in 0..out_dim {
        for j in 0..out_dim {
            let mut acc = Rational::zero();
            for k in 0..d {
                let x = &m[(compose(i, k), compose(j, k))];
                if !x.is_zero() {
                    acc += x;
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Reduced state of the lone party of `cut` (`d×d`).
pub fn single_marginal(m: &RationalMatrix, d: usize, cut: Bipartition) -> Result<RationalMatrix> {
    let [x, y] = cut.pair();
    // Trace the later party first so the earlier one keeps its position.
    let once = partial_trace(m, d, y)?;
    partial_trace(&once, d, x)
}

/// Reduced state of the two-party side of `cut` (`d²×d²`).
pub fn bimarginal(m: &RationalMatrix, d: usize, cut: Bipartition) -> Result<RationalMatrix> {
    partial_trace(m, d, cut.single())
}

/// Reorders a bipartite `d²×d²` matrix from `X⊗Y` to `Y⊗X`.
pub fn swap_factors(m: &RationalMatrix, d: usize) -> Result<RationalMatrix> {
    if party_count(m, d)? != 2 {
        return Err(Error::DimensionMismatch(
            "expected a d^2 x d^2 matrix".into(),
        ));
    }
    let n = d * d;
    let perm = |i: usize| (i % d) * d + i / d;
    let mut out = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(perm(i), perm(j))] = m[(i, j)].clone();
        }
    }
    Ok(out)
}

/// Transpose on the lone party of `cut`.
pub fn partial_transpose(m: &RationalMatrix, cut: Bipartition, d: usize) -> Result<RationalMatrix> {
    if party_count(m, d)? != 3 {
        return Err(Error::DimensionMismatch(
            "partial transpose needs a d^3 x d^3 matrix".into(),
        ));
    }
    let n = d * d * d;
    let stride = d.pow(2 - cut.single().index() as u32);
    let swap = |i: usize, j: usize| {
        let (ki, kj) = ((i / stride) % d, (j / stride) % d);
        (i - ki * stride + kj * stride, j - kj * stride + ki * stride)
    };
    let mut out = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &m[(i, j)];
            if !x.is_zero() {
                out[swap(i, j)] = x.clone();
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CutRanks {
    pub cut: Bipartition,
    /// Rank of the reduced state on the two-party side.
    pub bimarginal: usize,
    /// Rank of the reduced state on the lone party.
    pub single: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub n: usize,
    pub cuts: [CutRanks; 3],
}

impl RankProfile {
    pub fn cut(&self, cut: Bipartition) -> &CutRanks {
        &self.cuts[cut.single().index()]
    }

    pub fn bimarginals(&self) -> [usize; 3] {
        self.cuts.map(|c| c.bimarginal)
    }
}

pub fn cut_ranks(m: &RationalMatrix, d: usize, cut: Bipartition) -> Result<CutRanks> {
    Ok(CutRanks {
        cut,
        bimarginal: rank(&bimarginal(m, d, cut)?),
        single: rank(&single_marginal(m, d, cut)?),
    })
}

pub fn rank_profile(p: &SubspaceProjector) -> Result<RankProfile> {
    let cuts: Vec<CutRanks> = Bipartition::ALL
        .par_iter()
        .map(|&c| cut_ranks(&p.matrix, p.d, c))
        .collect::<Result<_>>()?;
    Ok(RankProfile {
        n: p.rank,
        cuts: [cuts[0], cuts[1], cuts[2]],
    })
}

/// Bimarginal ranks of the projector onto `span(vectors)`, computed without
/// forming the projector.
///
/// The range of `Tr_α ℙ` is spanned by the slices `v[α = k]` of any basis of
/// the subspace, so the rank is the dimension of that slice span.
pub fn span_bimarginal_ranks(vectors: &[RationalVector], d: usize) -> Result<[usize; 3]> {
    let n = d * d * d;
    if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for d={d}",
            v.dim()
        )));
    }
    let mut out = [0; 3];
    for cut in Bipartition::ALL {
        let t = cut.single().index();
        let stride = d.pow(2 - t as u32);
        let slices: Vec<RationalVector> = vectors
            .iter()
            .flat_map(|v| {
                (0..d).map(move |k| {
                    let rest = (0..d * d).map(|i| {
                        let idx = (i / stride) * stride * d + k * stride + i % stride;
                        v[idx].clone()
                    });
                    RationalVector::new(rest.collect())
                })
            })
            .collect();
        out[t] = span_dim(&slices);
    }
    Ok(out)
}

/// Single-copy distillability test: the subspace rank is below the larger
/// of the two marginal ranks across `cut`.
pub fn lemma1_criterion(p: &SubspaceProjector, cut: Bipartition) -> Result<bool> {
    let r = cut_ranks(&p.matrix, p.d, cut)?;
    Ok(p.rank < r.bimarginal.max(r.single))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutPt {
    pub cut: Bipartition,
    pub psd: bool,
    pub pt_invariant: bool,
    /// Enclosure of the smallest eigenvalue of the normalised partial
    /// transpose; present only for NPT cuts.
    pub min_eig: Option<Interval>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PtReport {
    pub cuts: [CutPt; 3],
}

impl PtReport {
    pub fn cut(&self, cut: Bipartition) -> &CutPt {
        &self.cuts[cut.single().index()]
    }

    pub fn ppt_everywhere(&self) -> bool {
        self.cuts.iter().all(|c| c.psd)
    }
}

pub fn cut_pt(p: &SubspaceProjector, cut: Bipartition) -> Result<CutPt> {
    let pt = partial_transpose(&p.matrix, cut, p.d)?;
    let pt_invariant = pt == p.matrix;
    let psd = is_psd(&pt)?;
    let min_eig = if psd || p.rank == 0 {
        None
    } else {
        let scaled = pt.checked_div_scalar(&Rational::from_integer(p.rank.into()))?;
        Some(min_eig_bound(&scaled)?)
    };
    Ok(CutPt {
        cut,
        psd,
        pt_invariant,
        min_eig,
    })
}

pub fn pt_report(p: &SubspaceProjector) -> Result<PtReport> {
    let cuts: Vec<CutPt> = Bipartition::ALL
        .par_iter()
        .map(|&c| cut_pt(p, c))
        .collect::<Result<_>>()?;
    let [a, b, c]: [CutPt; 3] = cuts.try_into().expect("three cuts");
    Ok(PtReport { cuts: [a, b, c] })
}

/// `Σ |v⟩⟨v|` without normalisation.
pub fn gram_sum(vectors: &[&RationalVector]) -> Result<RationalMatrix> {
    let n = vectors.first().map_or(0, |v| v.dim());
    let mut m = RationalMatrix::zeros(n, n);
    let minus_one = -Rational::one();
    for v in vectors {
        if v.dim() != n {
            return Err(Error::DimensionMismatch(
                "vectors of different lengths".into(),
            ));
        }
        m.sub_scaled_outer(&minus_one, v);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build, build_asymmetric_ubb, build_symmetric_ubb, build_upb};
    use crate::cube::Completion;
    use crate::linalg::{frac, int};

    #[test]
    fn complement_ranks() {
        let p = complement_projector(&build_symmetric_ubb(3).unwrap()).unwrap();
        assert_eq!(p.rank, 5);
        assert!(p.is_idempotent());
        assert!(p.matrix.is_symmetric());
        let p = complement_projector(&build_upb(3).unwrap()).unwrap();
        assert_eq!(p.rank, 8);
        assert_eq!(p.matrix.trace(), int(8));
        let t = build(3, BasisKind::Topb, Completion::IndexOrder).unwrap();
        assert!(complement_projector(&t).unwrap().matrix.is_zero());
    }

    #[test]
    fn complement_rejects_overlap() {
        let mut b = build_upb(3).unwrap();
        let dup = b.states[0].clone();
        b.states.push(dup);
        assert!(matches!(
            complement_projector(&b),
            Err(Error::NotOrthogonal(0, 19))
        ));
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        let rho = RationalMatrix::identity(27).scale(&frac(1, 27));
        for party in Party::ALL {
            let r = partial_trace(&rho, 3, party).unwrap();
            assert_eq!(r, RationalMatrix::identity(9).scale(&frac(1, 9)));
        }
        let r = partial_trace(&RationalMatrix::identity(9), 3, Party::B).unwrap();
        assert_eq!(r, RationalMatrix::identity(3).scale(&int(3)));
        assert!(partial_trace(&RationalMatrix::identity(9), 3, Party::C).is_err());
        assert!(partial_trace(&RationalMatrix::identity(10), 3, Party::A).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        // |0⟩⟨0| ⊗ |1⟩⟨1| ⊗ |2⟩⟨2|, tracing B leaves |0 2⟩⟨0 2| on AC.
        let mut m = RationalMatrix::zeros(27, 27);
        m[(5, 5)] = int(1);
        let ac = partial_trace(&m, 3, Party::B).unwrap();
        assert_eq!(ac[(2, 2)], int(1));
        assert_eq!(ac.trace(), int(1));
        let ca = swap_factors(&ac, 3).unwrap();
        assert_eq!(ca[(6, 6)], int(1));
        let a = single_marginal(&m, 3, Bipartition::SplitA).unwrap();
        let b = single_marginal(&m, 3, Bipartition::SplitB).unwrap();
        let c = single_marginal(&m, 3, Bipartition::SplitC).unwrap();
        assert_eq!(
            (a[(0, 0)].clone(), b[(1, 1)].clone(), c[(2, 2)].clone()),
            (int(1), int(1), int(1))
        );
    }

    #[test]
    fn partial_transpose_examples() {
        let diag = RationalMatrix::diagonal(&(0..27).map(|i| int(i as i64)).collect::<Vec<_>>());
        for cut in Bipartition::ALL {
            assert_eq!(partial_transpose(&diag, cut, 3).unwrap(), diag);
        }
        // |00⟩⟨11| on A (with B, C fixed at 0) moves to |10⟩⟨01| under T_A.
        let mut m = RationalMatrix::zeros(27, 27);
        m[(0, 9)] = int(1);
        let t = partial_transpose(&m, Bipartition::SplitA, 3).unwrap();
        assert_eq!(t[(9, 0)], int(1));
        let t = partial_transpose(&m, Bipartition::SplitB, 3).unwrap();
        assert_eq!(t, m);
    }

    #[test]
    fn rank_profiles() {
        let p = complement_projector(&build_symmetric_ubb(3).unwrap()).unwrap();
        let r = rank_profile(&p).unwrap();
        assert_eq!((r.n, r.bimarginals()), (5, [6, 6, 6]));
        for cut in Bipartition::ALL {
            assert!(lemma1_criterion(&p, cut).unwrap());
        }
        let q =
            complement_projector(&build_asymmetric_ubb(3, Bipartition::SplitC).unwrap()).unwrap();
        let r = rank_profile(&q).unwrap();
        assert_eq!(r.cut(Bipartition::SplitA).bimarginal, 7);
        assert_eq!(r.cut(Bipartition::SplitB).bimarginal, 7);
        assert!(lemma1_criterion(&q, Bipartition::SplitA).unwrap());
        let full = SubspaceProjector::identity(3);
        let r = rank_profile(&full).unwrap();
        assert_eq!(r.bimarginals(), [9, 9, 9]);
        assert!(r.cuts.iter().all(|c| c.single == 3));
        for cut in Bipartition::ALL {
            assert!(!lemma1_criterion(&full, cut).unwrap());
        }
    }

    #[test]
    fn pt_reports() {
        let ce8 = complement_projector(&build_upb(3).unwrap()).unwrap();
        assert!(pt_report(&ce8).unwrap().ppt_everywhere());
        let q =
            complement_projector(&build_asymmetric_ubb(3, Bipartition::SplitC).unwrap()).unwrap();
        let r = pt_report(&q).unwrap();
        assert!(r.cut(Bipartition::SplitC).psd && r.cut(Bipartition::SplitC).pt_invariant);
        for cut in [Bipartition::SplitA, Bipartition::SplitB] {
            let c = r.cut(cut);
            assert!(!c.psd && !c.pt_invariant);
            assert!(c.min_eig.unwrap().hi < 0.0);
        }
        let g5 = complement_projector(&build_symmetric_ubb(3).unwrap()).unwrap();
        assert!(pt_report(&g5).unwrap().cuts.iter().all(|c| !c.psd));
    }

    #[test]
    fn slice_ranks_match_projector_ranks() {
        let ubb = build_symmetric_ubb(3).unwrap();
        let ges = complement_basis(&ubb).unwrap();
        for k in 1..=ges.len() {
            let vs = &ges[..k];
            let p = SubspaceProjector::onto_span(3, vs).unwrap();
            assert_eq!(
                span_bimarginal_ranks(vs, 3).unwrap(),
                rank_profile(&p).unwrap().bimarginals()
            );
        }
        let q =
            complement_projector(&build_asymmetric_ubb(3, Bipartition::SplitC).unwrap()).unwrap();
        let vs = complement_basis(&build_asymmetric_ubb(3, Bipartition::SplitC).unwrap()).unwrap();
        assert_eq!(
            span_bimarginal_ranks(&vs, 3).unwrap(),
            rank_profile(&q).unwrap().bimarginals()
        );
    }

    #[test]
    fn span_projector() {
        let e0 = RationalVector::unit(27, 0);
        let p = SubspaceProjector::onto_span(3, &[e0.clone(), e0.scale(&int(2))]).unwrap();
        assert_eq!(p.rank, 1);
        assert_eq!(p.matrix[(0, 0)], int(1));
        assert!(p.is_idempotent());
    }
}
