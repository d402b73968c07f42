//! Run configuration, claim registry and report assembly shared by the CLI
//! and the integration tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use crate::analysis::{complement_projector, pt_report, rank_profile, PtReport, RankProfile};
use crate::basis::{build, BasisKind};
use crate::certify::{
    asymmetric_lemma_certificate, biseparable_search_certificate, positive_control_certificate,
    ppt_certificate, product_search_certificate, prop1_certificate, prop2_certificate,
    prop3_certificate, theorem1_certificate, verify_fact_i, verify_fact_ii, verify_fact_iii,
    verify_fact_iv, Certificate, Method, SeesawConfig, Verdict,
};
use crate::cube::Completion;
use crate::error::{Error, Result};
use crate::parties::Bipartition;

/// Claim id and the statement it certifies.
pub const CLAIMS: &[(&str, &str)] = &[
    ("topb", "the twisted product states form a complete orthogonal product basis"),
    ("prop1", "the product set is an unextendible product basis: no product state in its complement"),
    ("prop1-search", "numerical search finds no product state in the product-basis complement"),
    ("prop2", "the symmetric extension is an unextendible biseparable basis with a genuinely entangled complement"),
    ("prop2-search", "numerical search finds no biseparable state in the symmetric-extension complement"),
    ("prop3", "the one-cut extension is an unextendible biseparable basis with a genuinely entangled complement"),
    ("prop3-search", "numerical search finds no biseparable state in the one-cut-extension complement"),
    ("positive-control", "the product-basis complement contains a state separable across AB|C"),
    ("ppt", "the normalised product-basis complement projector is PPT in every cut"),
    ("asymmetric-lemma", "the one-cut complement state is PT-invariant in its cut and 1-distillable in the other two"),
    ("theorem1", "the full symmetric complement projector satisfies the rank criterion in every cut"),
    ("theorem1-sampled", "sampled lower-rank projectors in the symmetric complement satisfy the rank criterion"),
    ("fact-i", "the symmetric complement lies in the span of the missing states"),
    ("fact-ii", "an n-dimensional subspace of the complement needs at least n+1 missing states"),
    ("fact-iii", "each missing state adds at least one to every local rank"),
    ("fact-iv", "each in-complement combination of two missing states adds at least two to every local rank"),
];

pub fn claim_anchor(id: &str) -> Option<&'static str> {
    CLAIMS.iter().find(|(c, _)| *c == id).map(|(_, a)| *a)
}

/// Claim groups selectable with `--claim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimGroup {
    Prop1,
    Prop2,
    Prop3,
    Ppt,
    Lemma,
    Facts,
    Theorem1,
    Search,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub d: usize,
    pub kind: BasisKind,
    pub claim: Option<ClaimGroup>,
    pub seed: u64,
    pub seesaw: SeesawConfig,
    /// Random instances per sampled check.
    pub samples: usize,
    pub completion: Completion,
    pub out_dir: PathBuf,
    pub format: Format,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn new(d: usize, kind: BasisKind) -> Self {
        Self {
            d,
            kind,
            claim: None,
            seed: 0,
            seesaw: SeesawConfig::default(),
            samples: 200,
            completion: Completion::default(),
            out_dir: PathBuf::from("."),
            format: Format::Text,
            jobs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 3 {
            return Err(Error::InvalidDimension(self.d));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::InvalidArgument("jobs must be positive".into()));
        }
        self.seesaw.validate()?;
        if let Some(group) = self.claim {
            let ok = match group {
                ClaimGroup::Prop1 | ClaimGroup::Ppt => self.kind == BasisKind::Upb,
                ClaimGroup::Prop2 | ClaimGroup::Theorem1 | ClaimGroup::Facts => {
                    self.kind == BasisKind::UbbSymmetric
                }
                ClaimGroup::Prop3 | ClaimGroup::Lemma => {
                    matches!(self.kind, BasisKind::UbbAsymmetric(_))
                }
                ClaimGroup::Search => self.kind != BasisKind::Topb,
            };
            if !ok {
                return Err(Error::InvalidArgument(format!(
                    "claim {group:?} does not apply to set {}",
                    self.kind
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub states: usize,
    pub complement_dim: usize,
    pub certificates: Vec<Certificate>,
    /// Claim id to statement, for every claim in `certificates`.
    pub claims: BTreeMap<String, &'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_profile: Option<RankProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pt_report: Option<PtReport>,
    pub timings: Vec<Timing>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.certificates.iter().all(Certificate::passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(
            w,
            "{} {}  d={} set={}",
            self.tool, self.version, self.config.d, self.config.kind
        );
        let _ = writeln!(w, "states {}", self.states);
        let _ = writeln!(w, "complement dim {}", self.complement_dim);
        if let Some(r) = &self.rank_profile {
            let _ = writeln!(w, "rank {}", r.n);
            for c in &r.cuts {
                let _ = writeln!(
                    w,
                    "  {:<5} bimarginal rank {}  single-party rank {}",
                    c.cut, c.bimarginal, c.single
                );
            }
        }
        if let Some(pt) = &self.pt_report {
            for c in &pt.cuts {
                let verdict = if c.psd { "PPT" } else { "NPT" };
                let inv = if c.pt_invariant { "  pt-invariant" } else { "" };
                let eig = c
                    .min_eig
                    .map(|i| format!("  min eig in [{:.3e}, {:.3e}]", i.lo, i.hi))
                    .unwrap_or_default();
                let _ = writeln!(w, "  {:<5} {verdict}{inv}{eig}", c.cut);
            }
        }
        for c in &self.certificates {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            };
            let method = serde_json::to_value(c.method).expect("method serialises");
            let extra = match (c.seed, c.restarts) {
                (Some(s), Some(r)) => format!("  seed={s} n={r}"),
                (Some(s), None) => format!("  seed={s}"),
                _ => String::new(),
            };
            let _ = writeln!(
                w,
                "[{v}] {} ({}){extra}",
                c.claim,
                method.as_str().unwrap_or("")
            );
            if let Some(search) = c.witness.get("search") {
                let _ = writeln!(w, "       max overlap {}", search["max_overlap"]);
            }
        }
        for t in &self.timings {
            let _ = writeln!(w, "time {:<24} {:.3}s", t.stage, t.seconds);
        }
        out
    }
}

struct Stages {
    timings: Vec<Timing>,
}

impl Stages {
    fn run<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(Timing {
            stage: stage.into(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }
}

fn finish(
    cfg: &RunConfig,
    states: usize,
    certificates: Vec<Certificate>,
    stages: Stages,
) -> Report {
    let claims = certificates
        .iter()
        .map(|c| {
            let anchor = claim_anchor(&c.claim).expect("every certificate claim is registered");
            (c.claim.clone(), anchor)
        })
        .collect();
    Report {
        tool: "ubbcert",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.clone(),
        states,
        complement_dim: cfg.d.pow(3) - states,
        certificates,
        claims,
        rank_profile: None,
        pt_report: None,
        timings: stages.timings,
    }
}

fn cuts_for(kind: BasisKind) -> Vec<Bipartition> {
    match kind {
        BasisKind::UbbAsymmetric(c) => vec![c],
        _ => Bipartition::ALL.to_vec(),
    }
}

fn seesaw(cfg: &RunConfig) -> SeesawConfig {
    SeesawConfig {
        seed: cfg.seed,
        ..cfg.seesaw
    }
}

fn group_certificates(
    cfg: &RunConfig,
    group: ClaimGroup,
    stages: &mut Stages,
) -> Result<Vec<Certificate>> {
    let d = cfg.d;
    let mut out = Vec::new();
    match group {
        ClaimGroup::Prop1 => out.push(stages.run("prop1", || prop1_certificate(d))?),
        ClaimGroup::Prop2 => out.push(stages.run("prop2", || prop2_certificate(d, cfg.seed))?),
        ClaimGroup::Prop3 => {
            for cut in cuts_for(cfg.kind) {
                out.push(stages.run("prop3", || prop3_certificate(d, cut, cfg.seed))?);
            }
        }
        ClaimGroup::Ppt => out.push(stages.run("ppt", || ppt_certificate(d))?),
        ClaimGroup::Lemma => {
            for cut in cuts_for(cfg.kind) {
                out.push(stages.run("asymmetric-lemma", || asymmetric_lemma_certificate(d, cut))?);
            }
        }
        ClaimGroup::Facts => {
            out.push(stages.run("fact-i", || verify_fact_i(d))?);
            out.push(stages.run("fact-ii", || verify_fact_ii(d))?);
            out.push(stages.run("fact-iii", || verify_fact_iii(d))?);
            out.push(stages.run("fact-iv", || verify_fact_iv(d, cfg.samples, cfg.seed))?);
        }
        ClaimGroup::Theorem1 => out.extend(stages.run("theorem1", || {
            theorem1_certificate(d, cfg.samples, cfg.seed)
        })?),
        ClaimGroup::Search => {
            let s = seesaw(cfg);
            match cfg.kind {
                BasisKind::Upb => {
                    out.push(stages.run("prop1-search", || product_search_certificate(d, &s))?);
                    out.push(
                        stages.run("positive-control", || positive_control_certificate(d, &s))?,
                    );
                }
                BasisKind::Topb => {}
                kind => {
                    for cut in Bipartition::ALL {
                        out.push(stages.run("biseparable-search", || {
                            biseparable_search_certificate(d, kind, cut, &s)
                        })?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Structural checks that need no claim: the complete basis is orthogonal
/// and product.
fn topb_certificate(cfg: &RunConfig) -> Result<Certificate> {
    let set = build(cfg.d, BasisKind::Topb, cfg.completion)?;
    let orth = set.check_orthogonal().is_ok();
    let mut product = true;
    for s in &set.states {
        for cut in Bipartition::ALL {
            product &= crate::certify::schmidt_rank(s, cut)? == 1;
        }
    }
    let ok = orth && product && set.len() == cfg.d.pow(3);
    Ok(Certificate {
        claim: "topb".into(),
        d: cfg.d,
        method: Method::StructuralExact,
        verdict: Verdict::from_bool(ok),
        witness: serde_json::json!({"states": set.len(), "orthogonal": orth, "product": product}),
        seed: None,
        restarts: None,
        scope: "exact".into(),
    })
}

fn default_groups(kind: BasisKind) -> Vec<ClaimGroup> {
    match kind {
        BasisKind::Topb => vec![],
        BasisKind::Upb => vec![ClaimGroup::Prop1, ClaimGroup::Ppt],
        BasisKind::UbbSymmetric => vec![ClaimGroup::Prop2],
        BasisKind::UbbAsymmetric(_) => vec![ClaimGroup::Prop3, ClaimGroup::Lemma],
    }
}

/// Projector analysis (ranks, partial transposes) plus the selected claims.
pub fn run_verify(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut stages = Stages {
        timings: Vec::new(),
    };
    let set = stages.run("construct", || build(cfg.d, cfg.kind, cfg.completion))?;
    let p = stages.run("projector", || complement_projector(&set))?;
    let (profile, pt) = if p.rank == 0 {
        (None, None)
    } else {
        (
            Some(stages.run("rank profile", || rank_profile(&p))?),
            Some(stages.run("partial transposes", || pt_report(&p))?),
        )
    };
    let mut certs = Vec::new();
    if cfg.kind == BasisKind::Topb {
        certs.push(topb_certificate(cfg)?);
    }
    let groups = cfg
        .claim
        .map_or_else(|| default_groups(cfg.kind), |g| vec![g]);
    for g in groups {
        certs.extend(group_certificates(cfg, g, &mut stages)?);
    }
    let mut report = finish(cfg, set.len(), certs, stages);
    report.rank_profile = profile;
    report.pt_report = pt;
    Ok(report)
}

/// Structural and numerical certificates for one claim group.
pub fn run_certify(cfg: &RunConfig, group: ClaimGroup) -> Result<Report> {
    cfg.validate()?;
    let mut stages = Stages {
        timings: Vec::new(),
    };
    let set = build(cfg.d, cfg.kind, cfg.completion)?;
    let mut certs = group_certificates(cfg, group, &mut stages)?;
    if matches!(
        group,
        ClaimGroup::Prop1 | ClaimGroup::Prop2 | ClaimGroup::Prop3
    ) {
        certs.extend(group_certificates(cfg, ClaimGroup::Search, &mut stages)?);
    }
    Ok(finish(cfg, set.len(), certs, stages))
}

/// Every claim group that applies to `d`, across all sets.
pub fn run_full_report(base: &RunConfig) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    let kinds = [
        (
            BasisKind::Upb,
            vec![ClaimGroup::Prop1, ClaimGroup::Ppt, ClaimGroup::Search],
        ),
        (
            BasisKind::UbbSymmetric,
            vec![
                ClaimGroup::Prop2,
                ClaimGroup::Theorem1,
                ClaimGroup::Facts,
                ClaimGroup::Search,
            ],
        ),
    ];
    let asym = Bipartition::ALL.map(|c| {
        (
            BasisKind::UbbAsymmetric(c),
            vec![ClaimGroup::Prop3, ClaimGroup::Lemma, ClaimGroup::Search],
        )
    });
    for (kind, groups) in kinds.into_iter().chain(asym) {
        let cfg = RunConfig {
            kind,
            claim: None,
            ..base.clone()
        };
        let mut report = run_verify(&cfg)?;
        for g in groups
            .into_iter()
            .filter(|&g| !default_groups(kind).contains(&g))
        {
            let mut stages = Stages {
                timings: Vec::new(),
            };
            let certs = group_certificates(&cfg, g, &mut stages)?;
            for c in &certs {
                report.claims.insert(
                    c.claim.clone(),
                    claim_anchor(&c.claim).expect("registered claim"),
                );
            }
            report.certificates.extend(certs);
            report.timings.extend(stages.timings);
        }
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique() {
        let mut ids: Vec<&str> = CLAIMS.iter().map(|(c, _)| *c).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), CLAIMS.len());
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::new(3, BasisKind::Upb).validate().is_ok());
        assert!(RunConfig::new(2, BasisKind::Upb).validate().is_err());
        let mut c = RunConfig::new(3, BasisKind::Upb);
        c.claim = Some(ClaimGroup::Theorem1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn verify_reports() {
        let r = run_verify(&RunConfig::new(3, BasisKind::UbbSymmetric)).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.rank_profile.as_ref().unwrap().bimarginals(), [6, 6, 6]);
        assert!(r.to_text().contains("complement dim 5"));
        let t = run_verify(&RunConfig::new(3, BasisKind::Topb)).unwrap();
        assert!(t.all_passed() && t.rank_profile.is_none());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["complement_dim"], 5);
    }
}
