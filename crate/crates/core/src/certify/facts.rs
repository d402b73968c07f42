//! Rank facts about the missing states of the symmetric UBB and the sampled
//! distillability check of projectors inside its complement.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use super::sampling::{random_rational, sub_rng};
use super::{Certificate, Method, Verdict};
use crate::analysis::{
    complement_basis, partial_trace, rank_profile, span_bimarginal_ranks, SubspaceProjector,
};
use crate::basis::{build_symmetric_ubb, missing_states, BasisKind, BasisSet, MissingStateSet};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, rank, span_dim, Rational, RationalMatrix, RationalVector};
use crate::parties::Party;

/// Upper limit on `|𝓜|` for the exhaustive subset facts.
const MAX_EXHAUSTIVE: usize = 16;

struct Context {
    ubb: BasisSet,
    missing: MissingStateSet,
    ges: Vec<RationalVector>,
}

impl Context {
    fn new(d: usize) -> Result<Self> {
        let ubb = build_symmetric_ubb(d)?;
        let ges = complement_basis(&ubb)?;
        Ok(Self {
            missing: missing_states(d, BasisKind::UbbSymmetric)?,
            ubb,
            ges,
        })
    }

    fn m(&self) -> Vec<RationalVector> {
        self.missing.vectors()
    }

    fn labels(&self, idx: impl IntoIterator<Item = usize>) -> Vec<String> {
        idx.into_iter()
            .map(|i| self.missing.states[i].label().to_string())
            .collect()
    }
}

fn outer(v: &RationalVector) -> RationalMatrix {
    RationalMatrix::outer(v)
}

/// `Tr_α |v⟩⟨v|` for each party.
fn local_marginals(v: &RationalVector, d: usize) -> Result<Vec<RationalMatrix>> {
    let o = outer(v);
    Party::ALL
        .iter()
        .map(|&p| partial_trace(&o, d, p))
        .collect()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
}

fn exhaustive_guard(ctx: &Context) -> Result<()> {
    if ctx.missing.len() > MAX_EXHAUSTIVE {
        return Err(Error::InvalidArgument(format!(
            "{} missing states is too many for exhaustive enumeration",
            ctx.missing.len()
        )));
    }
    Ok(())
}

/// The complement of the symmetric UBB lies in the span of the missing
/// states.
pub fn verify_fact_i(d: usize) -> Result<Certificate> {
    let ctx = Context::new(d)?;
    let m = ctx.m();
    let span_m = span_dim(&m);
    let mut stacked = m.clone();
    stacked.extend(ctx.ges.iter().cloned());
    let joint = span_dim(&stacked);
    let ok = span_m == m.len() && joint == m.len();
    Ok(Certificate {
        claim: "fact-i".into(),
        d,
        method: Method::StructuralExact,
        verdict: Verdict::from_bool(ok),
        witness: json!({
            "missing_states": m.len(),
            "span_missing": span_m,
            "ges_dim": ctx.ges.len(),
            "span_missing_plus_ges": joint,
        }),
        seed: None,
        restarts: None,
        scope: "exact rank of the missing states stacked with a complement basis".into(),
    })
}

/// For every subset `T` of the missing states, `dim(span T ∩ 𝒢𝓔) ≤ |T| − 1`;
/// so any `n`-dimensional subspace of the complement needs more than `n`
/// missing states.
pub fn verify_fact_ii(d: usize) -> Result<Certificate> {
    let ctx = Context::new(d)?;
    exhaustive_guard(&ctx)?;
    let m = ctx.m();
    let g = ctx.ges.len();
    let failures: Vec<serde_json::Value> = subsets(m.len())
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|t| {
            let vs: Vec<RationalVector> = t.iter().map(|&i| m[i].clone()).collect();
            let rt = span_dim(&vs);
            let mut joint = vs;
            joint.extend(ctx.ges.iter().cloned());
            let inter = rt + g - span_dim(&joint);
            (inter + 1 > t.len())
                .then(|| json!({"subset": ctx.labels(t.iter().copied()), "intersection": inter}))
        })
        .collect();
    Ok(Certificate {
        claim: "fact-ii".into(),
        d,
        method: Method::ExhaustiveExact,
        verdict: Verdict::from_bool(failures.is_empty()),
        witness: json!({"subsets": (1usize << m.len()) - 1, "failures": failures}),
        seed: None,
        restarts: None,
        scope: "all nonempty subsets of the missing states".into(),
    })
}

/// For every subset `T` and party `α`, `rank Tr_α[Σ_{m∈T} |m⟩⟨m|] ≥ |T|`.
pub fn verify_fact_iii(d: usize) -> Result<Certificate> {
    let ctx = Context::new(d)?;
    exhaustive_guard(&ctx)?;
    let marg: Vec<Vec<RationalMatrix>> = ctx
        .m()
        .iter()
        .map(|v| local_marginals(v, d))
        .collect::<Result<_>>()?;
    let all: Vec<Vec<usize>> = subsets(marg.len()).collect();
    let failures: Vec<serde_json::Value> = all
        .par_iter()
        .flat_map_iter(|t| {
            let marg = &marg;
            let ctx = &ctx;
            Party::ALL.iter().filter_map(move |&p| {
                let mut sum = marg[t[0]][p.index()].clone();
                for &i in &t[1..] {
                    sum = sum.add(&marg[i][p.index()]).expect("same shape");
                }
                let r = rank(&sum);
                (r < t.len()).then(|| {
                    json!({"subset": ctx.labels(t.iter().copied()), "traced": p.to_string(), "rank": r})
                })
            })
        })
        .collect();
    Ok(Certificate {
        claim: "fact-iii".into(),
        d,
        method: Method::ExhaustiveExact,
        verdict: Verdict::from_bool(failures.is_empty()),
        witness: json!({"subsets": all.len(), "cuts": 3, "failures": failures}),
        seed: None,
        restarts: None,
        scope: "all nonempty subsets of the missing states, every traced party".into(),
    })
}

/// Coefficients `(a, b)` with `a·m′ + b·m″` orthogonal to every state of
/// `ubb`, if that combination is unique up to scale and uses both states.
pub fn ges_combination(
    ubb: &BasisSet,
    m1: &RationalVector,
    m2: &RationalVector,
) -> Result<Option<(Rational, Rational)>> {
    let rows: Vec<RationalVector> = ubb
        .states
        .iter()
        .map(|s| RationalVector::new(vec![s.coeffs().dot(m1), s.coeffs().dot(m2)]))
        .collect();
    let k = kernel_basis(&RationalMatrix::from_rows(&rows)?);
    Ok(match k.as_slice() {
        [v] if !v[0].is_zero() && !v[1].is_zero() => Some((v[0].clone(), v[1].clone())),
        _ => None,
    })
}

/// For each pair of missing states, sampled combinations inside the
/// complement have every local rank ≥ 2, and adding any third missing state
/// raises each local rank by at least one.
pub fn verify_fact_iv(d: usize, samples: usize, seed: u64) -> Result<Certificate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let ctx = Context::new(d)?;
    let m = ctx.m();
    let marg: Vec<Vec<RationalMatrix>> = m
        .iter()
        .map(|v| local_marginals(v, d))
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..m.len())
        .flat_map(|i| (i + 1..m.len()).map(move |j| (i, j)))
        .collect();
    struct PairResult {
        skipped: bool,
        checks: usize,
        failures: Vec<serde_json::Value>,
    }
    let results: Vec<PairResult> = pairs
        .par_iter()
        .enumerate()
        .map(|(pi, &(i, j))| -> Result<PairResult> {
            let Some((a, b)) = ges_combination(&ctx.ubb, &m[i], &m[j])? else {
                return Ok(PairResult {
                    skipped: true,
                    checks: 0,
                    failures: vec![],
                });
            };
            let mut rng = sub_rng(seed, pi as u64);
            let mut checks = 0;
            let mut failures = Vec::new();
            for _ in 0..samples {
                let alpha = random_rational(&mut rng);
                let beta = &alpha * &b / &a;
                let l = m[i].scale(&alpha).axpy(&beta, &m[j]);
                let inside = ctx.ubb.states.iter().all(|s| s.coeffs().dot(&l).is_zero());
                let lm = local_marginals(&l, d)?;
                for p in Party::ALL {
                    let r = rank(&lm[p.index()]);
                    checks += 1;
                    if !inside || r < 2 {
                        failures.push(json!({"pair": ctx.labels([i, j]), "traced": p.to_string(), "rank": r, "inside": inside}));
                        continue;
                    }
                    for k in (0..m.len()).filter(|&k| k != i && k != j) {
                        let sum = lm[p.index()].add(&marg[k][p.index()])?;
                        let rk = rank(&sum);
                        checks += 1;
                        if rk < r + 1 {
                            failures.push(json!({"pair": ctx.labels([i, j]), "third": ctx.labels([k]), "traced": p.to_string(), "rank": rk, "base": r}));
                        }
                    }
                }
            }
            Ok(PairResult {
                skipped: false,
                checks,
                failures,
            })
        })
        .collect::<Result<_>>()?;
    let skipped: Vec<Vec<String>> = pairs
        .iter()
        .zip(&results)
        .filter(|(_, r)| r.skipped)
        .map(|(&(i, j), _)| ctx.labels([i, j]))
        .collect();
    let failures: Vec<serde_json::Value> =
        results.iter().flat_map(|r| r.failures.clone()).collect();
    let checks: usize = results.iter().map(|r| r.checks).sum();
    Ok(Certificate {
        claim: "fact-iv".into(),
        d,
        method: Method::SampledExact,
        verdict: Verdict::from_bool(failures.is_empty()),
        witness: json!({
            "pairs": pairs.len(),
            "samples_per_pair": samples,
            "skipped_pairs": skipped,
            "checks": checks,
            "failures": failures,
        }),
        seed: Some(seed),
        restarts: Some(samples),
        scope: "sampled rational combinations; each combination is unique up to scale, so samples vary only the scale".into(),
    })
}

/// Samples rank-`n` projectors inside the complement of the symmetric UBB
/// and checks that every bimarginal has rank at least `n + 1`.
pub fn verify_theorem1_sampled(
    d: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Certificate> {
    let ubb = build_symmetric_ubb(d)?;
    let ges = complement_basis(&ubb)?;
    let g = ges.len();
    if n == 0 || n > g {
        return Err(Error::InvalidArgument(format!("n must be in 1..={g}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let draws = if n == g { 1 } else { samples };
    let outcomes: Vec<[usize; 3]> = (0..draws)
        .into_par_iter()
        .map(|s| -> Result<[usize; 3]> {
            let vectors = if n == g {
                ges.clone()
            } else {
                let mut rng = sub_rng(seed, s as u64);
                loop {
                    let vs: Vec<RationalVector> = (0..n)
                        .map(|_| {
                            ges.iter().fold(RationalVector::zeros(d * d * d), |acc, b| {
                                acc.axpy(&random_rational(&mut rng), b)
                            })
                        })
                        .collect();
                    if span_dim(&vs) == n {
                        break vs;
                    }
                }
            };
            if n == g {
                let p = SubspaceProjector::onto_span(d, &vectors)?;
                return Ok(rank_profile(&p)?.bimarginals());
            }
            span_bimarginal_ranks(&vectors, d)
        })
        .collect::<Result<_>>()?;
    let violations = outcomes
        .iter()
        .filter(|r| r.iter().any(|&x| x < n + 1))
        .count();
    let min = outcomes.iter().flatten().copied().min().unwrap_or(0);
    Ok(Certificate {
        claim: "theorem1-sampled".into(),
        d,
        method: if n == g {
            Method::StructuralExact
        } else {
            Method::SampledExact
        },
        verdict: Verdict::from_bool(violations == 0),
        witness: json!({
            "n": n,
            "ges_dim": g,
            "samples": draws,
            "min_bimarginal_rank": min,
            "violations": violations,
            "first_profile": outcomes.first(),
        }),
        seed: (n < g).then_some(seed),
        restarts: (n < g).then_some(draws),
        scope: if n == g {
            "the unique full-rank projector".into()
        } else {
            "random rational rank-n subspaces, each checked exactly; bimarginal ranks from the slice span of a basis".into()
        },
    })
}
