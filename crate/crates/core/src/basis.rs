//! Stopper state, unextendible product basis, and the symmetric and
//! asymmetric unextendible biseparable bases built from it.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cube::{
    build_topb_with, layer_count, Completion, FaceRole, LayerGeometry, Topb, TripartiteState,
};
use crate::error::{Error, Result};
use crate::linalg::{int, Rational, RationalVector};
use crate::parties::Bipartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Topb,
    Upb,
    UbbSymmetric,
    UbbAsymmetric(Bipartition),
}

impl BasisKind {
    pub fn cut(self) -> Option<Bipartition> {
        match self {
            BasisKind::UbbAsymmetric(c) => Some(c),
            _ => None,
        }
    }

    /// CLI spelling: `topb`, `upb`, `ubb-sym`, `ubb-asym`.
    pub fn set_name(self) -> &'static str {
        match self {
            BasisKind::Topb => "topb",
            BasisKind::Upb => "upb",
            BasisKind::UbbSymmetric => "ubb-sym",
            BasisKind::UbbAsymmetric(_) => "ubb-asym",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::UbbAsymmetric(c) => write!(f, "ubb-asym[{c}]"),
            k => f.write_str(k.set_name()),
        }
    }
}

/// Set names as accepted on the command line. `ubb-asym` needs a cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetName {
    Topb,
    Upb,
    UbbSym,
    UbbAsym,
}

impl SetName {
    pub fn with_cut(self, cut: Option<Bipartition>) -> Result<BasisKind> {
        match (self, cut) {
            (SetName::Topb, None) => Ok(BasisKind::Topb),
            (SetName::Upb, None) => Ok(BasisKind::Upb),
            (SetName::UbbSym, None) => Ok(BasisKind::UbbSymmetric),
            (SetName::UbbAsym, Some(c)) => Ok(BasisKind::UbbAsymmetric(c)),
            (SetName::UbbAsym, None) => Err(Error::InvalidArgument("ubb-asym needs a cut".into())),
            (s, Some(_)) => Err(Error::InvalidArgument(format!("set {s:?} takes no cut"))),
        }
    }
}

impl FromStr for SetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topb" => Ok(SetName::Topb),
            "upb" => Ok(SetName::Upb),
            "ubb-sym" => Ok(SetName::UbbSym),
            "ubb-asym" => Ok(SetName::UbbAsym),
            _ => Err(Error::InvalidArgument(format!("unknown set {s:?}"))),
        }
    }
}

/// Ordered set of mutually orthogonal states.
#[derive(Clone, Debug)]
pub struct BasisSet {
    pub d: usize,
    pub kind: BasisKind,
    pub states: Vec<TripartiteState>,
    /// Number of leading states that belong to the product basis; the rest
    /// were appended (biseparable states for the UBB kinds).
    pub product_len: usize,
}

impl BasisSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn cut(&self) -> Option<Bipartition> {
        self.kind.cut()
    }

    pub fn complement_dim(&self) -> usize {
        self.d.pow(3) - self.states.len()
    }

    pub fn appended(&self) -> &[TripartiteState] {
        &self.states[self.product_len..]
    }

    /// First non-orthogonal pair, if any.
    pub fn check_orthogonal(&self) -> Result<()> {
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate().skip(i + 1) {
                if a.support().is_disjoint(b.support()) {
                    continue;
                }
                if !a.is_orthogonal(b) {
                    return Err(Error::NotOrthogonal(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn vectors(&self) -> Vec<RationalVector> {
        self.states.iter().map(|s| s.coeffs().clone()).collect()
    }
}

/// `(|0⟩ + … + |d−1⟩)^{⊗3}`.
pub fn stopper(d: usize) -> Result<TripartiteState> {
    if d < 3 {
        return Err(Error::InvalidDimension(d));
    }
    let ones = RationalVector::ones(d);
    Ok(TripartiteState::product(&ones, &ones, &ones, "S"))
}

/// Closed-form size of the product basis: `6·Σ(w_l² − 1) + inner + 1`.
pub fn upb_cardinality(d: usize) -> usize {
    let faces: usize = (1..=layer_count(d))
        .map(|l| {
            let w = LayerGeometry::new(d, l).expect("valid layer").width();
            6 * (w * w - 1)
        })
        .sum();
    faces + if d % 2 == 0 { 7 } else { 0 } + 1
}

/// Face pairs whose `ψ(0,0)` differences are appended to the symmetric UBB,
/// with the cut each difference is separable in.
pub const SYMMETRIC_PAIRS: [(FaceRole, FaceRole, Bipartition); 3] = [
    (FaceRole::F1, FaceRole::F2, Bipartition::SplitC),
    (FaceRole::F3, FaceRole::F4, Bipartition::SplitB),
    (FaceRole::F5, FaceRole::F6, Bipartition::SplitA),
];

/// Per-layer recipe of the asymmetric UBB for one cut: two face pairs, the
/// face anchored at the `lo` diagonal cell and the face anchored at `hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AsymmetricRecipe {
    pub pairs: [(FaceRole, FaceRole); 2],
    pub lo_anchor: FaceRole,
    pub hi_anchor: FaceRole,
}

pub fn asymmetric_recipe(cut: Bipartition) -> AsymmetricRecipe {
    use FaceRole::*;
    match cut {
        Bipartition::SplitC => AsymmetricRecipe {
            pairs: [(F1, F2), (F3, F5)],
            lo_anchor: F4,
            hi_anchor: F6,
        },
        Bipartition::SplitA => AsymmetricRecipe {
            pairs: [(F2, F4), (F5, F6)],
            lo_anchor: F1,
            hi_anchor: F3,
        },
        Bipartition::SplitB => AsymmetricRecipe {
            pairs: [(F1, F6), (F3, F4)],
            lo_anchor: F5,
            hi_anchor: F2,
        },
    }
}

pub fn build_upb(d: usize) -> Result<BasisSet> {
    build(d, BasisKind::Upb, Completion::default())
}

pub fn build_symmetric_ubb(d: usize) -> Result<BasisSet> {
    build(d, BasisKind::UbbSymmetric, Completion::default())
}

pub fn build_asymmetric_ubb(d: usize, cut: Bipartition) -> Result<BasisSet> {
    build(d, BasisKind::UbbAsymmetric(cut), Completion::default())
}

/// Builds any of the four sets with the given family completion.
pub fn build(d: usize, kind: BasisKind, completion: Completion) -> Result<BasisSet> {
    let topb = build_topb_with(d, completion)?;
    let set = build_from_topb(&topb, kind)?;
    debug_assert!(set.check_orthogonal().is_ok());
    Ok(set)
}

pub fn build_from_topb(topb: &Topb, kind: BasisKind) -> Result<BasisSet> {
    let d = topb.d;
    if kind == BasisKind::Topb {
        let states: Vec<TripartiteState> = topb.states().into_iter().cloned().collect();
        let n = states.len();
        return Ok(BasisSet {
            d,
            kind,
            states,
            product_len: n,
        });
    }
    let mut states: Vec<TripartiteState> = Vec::with_capacity(d * d * d);
    for face in &topb.faces {
        states.extend(face.states.iter().skip(1).cloned());
    }
    states.extend(topb.inner_cube.iter().skip(1).cloned());
    states.push(stopper(d)?);
    let product_len = states.len();
    debug_assert_eq!(product_len, upb_cardinality(d));

    match kind {
        BasisKind::Topb | BasisKind::Upb => {}
        BasisKind::UbbSymmetric => {
            for layer in 1..=topb.layers() {
                for (x, y, _) in SYMMETRIC_PAIRS {
                    states.push(pair_state(topb, x, y, layer, false));
                }
            }
        }
        BasisKind::UbbAsymmetric(cut) => {
            let recipe = asymmetric_recipe(cut);
            for layer in 1..=topb.layers() {
                for (x, y) in recipe.pairs {
                    states.push(pair_state(topb, x, y, layer, false));
                }
            }
            let mut anchors = Vec::new();
            for layer in 1..=topb.layers() {
                let g = LayerGeometry::new(d, layer)?;
                for (k, face) in [(g.lo, recipe.lo_anchor), (g.hi, recipe.hi_anchor)] {
                    if anchors.contains(&k) {
                        return Err(Error::InvalidArgument(format!(
                            "diagonal anchor {k} used twice"
                        )));
                    }
                    anchors.push(k);
                    states.push(anchored_state(topb, k, face, layer, false)?);
                }
            }
        }
    }
    Ok(BasisSet {
        d,
        kind,
        states,
        product_len,
    })
}

/// `ψ(0,0)_x ∓ ψ(0,0)_y` in one layer.
fn pair_state(topb: &Topb, x: FaceRole, y: FaceRole, layer: usize, plus: bool) -> TripartiteState {
    let fx = topb.face(x, layer).expect("face exists");
    let fy = topb.face(y, layer).expect("face exists");
    let sign = if plus { '+' } else { '-' };
    let label = format!("psi{sign}^({layer})_{}{}", fx.label, fy.label);
    let b = if plus { int(1) } else { int(-1) };
    fx.psi00().combine(&int(1), fy.psi00(), &b, label)
}

/// Coefficient `c` making `c|kkk⟩ − ψ(0,0)_face` orthogonal to the stopper.
pub fn anchor_coefficient(topb: &Topb, k: usize, face: FaceRole, layer: usize) -> Result<Rational> {
    let s = stopper(topb.d)?;
    let diag = TripartiteState::basis(topb.d, k, k, k);
    let f = topb
        .face(face, layer)
        .ok_or_else(|| Error::InvalidArgument(format!("no face {face:?} in layer {layer}")))?;
    let den = s.inner(&diag);
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(s.inner(f.psi00()) / den)
}

/// Anchored state `c|kkk⟩ − ψ(0,0)_face` (or its partner `|kkk⟩ + ψ(0,0)_face`).
fn anchored_state(
    topb: &Topb,
    k: usize,
    face: FaceRole,
    layer: usize,
    plus: bool,
) -> Result<TripartiteState> {
    let diag = TripartiteState::basis(topb.d, k, k, k);
    let f = topb.face(face, layer).expect("face exists");
    if !diag.support().is_disjoint(f.psi00().support()) {
        return Err(Error::InvalidArgument(format!(
            "anchor |{k}{k}{k}> overlaps face B{}",
            f.label
        )));
    }
    if plus {
        let label = format!("psi+^({layer})_({k}){}", f.label);
        return Ok(diag.combine(&int(1), f.psi00(), &int(1), label));
    }
    let c = anchor_coefficient(topb, k, face, layer)?;
    let label = format!("psi-^({layer})_({k}){} [c={c}]", f.label);
    Ok(diag.combine(&c, f.psi00(), &int(-1), label))
}

/// States removed from the t-OPB whose span contains the complement.
#[derive(Clone, Debug)]
pub struct MissingStateSet {
    pub d: usize,
    pub kind: BasisKind,
    pub states: Vec<TripartiteState>,
}

impl MissingStateSet {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn vectors(&self) -> Vec<RationalVector> {
        self.states.iter().map(|s| s.coeffs().clone()).collect()
    }
}

pub fn missing_states(d: usize, kind: BasisKind) -> Result<MissingStateSet> {
    missing_states_with(d, kind, Completion::default())
}

pub fn missing_states_with(
    d: usize,
    kind: BasisKind,
    completion: Completion,
) -> Result<MissingStateSet> {
    let topb = build_topb_with(d, completion)?;
    missing_states_from_topb(&topb, kind)
}

pub fn missing_states_from_topb(topb: &Topb, kind: BasisKind) -> Result<MissingStateSet> {
    let d = topb.d;
    let mut states = Vec::new();
    let mut anchored: Vec<usize> = Vec::new();
    let mut tail = Vec::new();
    match kind {
        BasisKind::Topb => {
            return Err(Error::InvalidArgument(
                "a complete basis has no missing states".into(),
            ))
        }
        BasisKind::Upb => {
            for face in &topb.faces {
                tail.push(face.psi00().clone());
            }
        }
        BasisKind::UbbSymmetric => {
            for layer in 1..=topb.layers() {
                for (x, y, _) in SYMMETRIC_PAIRS {
                    tail.push(pair_state(topb, x, y, layer, true));
                }
            }
        }
        BasisKind::UbbAsymmetric(cut) => {
            let recipe = asymmetric_recipe(cut);
            for layer in 1..=topb.layers() {
                for (x, y) in recipe.pairs {
                    tail.push(pair_state(topb, x, y, layer, true));
                }
            }
            for layer in 1..=topb.layers() {
                let g = LayerGeometry::new(d, layer)?;
                for (k, face) in [(g.lo, recipe.lo_anchor), (g.hi, recipe.hi_anchor)] {
                    anchored.push(k);
                    tail.push(anchored_state(topb, k, face, layer, true)?);
                }
            }
        }
    }
    for s in &topb.diagonal {
        let k = s.support().iter().next().expect("basis state").p;
        if !anchored.contains(&k) {
            states.push(s.clone());
        }
    }
    if let Some(first) = topb.inner_cube.first() {
        states.push(first.clone());
    }
    states.extend(tail);
    Ok(MissingStateSet { d, kind, states })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::span_dim;

    #[test]
    fn stopper_is_all_ones() {
        assert_eq!(stopper(3).unwrap().coeffs(), &RationalVector::ones(27));
        assert_eq!(stopper(4).unwrap().coeffs(), &RationalVector::ones(64));
        assert!(stopper(2).is_err());
        let topb = build_topb_with(3, Completion::IndexOrder).unwrap();
        let psi4 = topb.face_by_label(4, 1).unwrap().psi00();
        assert_eq!(stopper(3).unwrap().inner(psi4), int(4));
    }

    #[test]
    fn cardinalities() {
        for (d, upb, sym) in [(3, 19, 22), (4, 56, 59), (5, 109, 115)] {
            let u = build_upb(d).unwrap();
            assert_eq!(u.len(), upb);
            assert_eq!(upb_cardinality(d), upb);
            let s = build_symmetric_ubb(d).unwrap();
            assert_eq!(s.len(), sym);
        }
        assert_eq!(build_upb(3).unwrap().complement_dim(), 8);
        assert_eq!(build_upb(4).unwrap().complement_dim(), 8);
        assert_eq!(build_upb(5).unwrap().complement_dim(), 16);
        assert_eq!(build_symmetric_ubb(5).unwrap().complement_dim(), 10);
        for cut in Bipartition::ALL {
            let a = build_asymmetric_ubb(3, cut).unwrap();
            assert_eq!(a.len(), 23);
            assert_eq!(a.complement_dim(), 4);
        }
    }

    #[test]
    fn sets_are_orthogonal() {
        for d in 3..=5 {
            for kind in [
                BasisKind::Topb,
                BasisKind::Upb,
                BasisKind::UbbSymmetric,
                BasisKind::UbbAsymmetric(Bipartition::SplitA),
                BasisKind::UbbAsymmetric(Bipartition::SplitB),
                BasisKind::UbbAsymmetric(Bipartition::SplitC),
            ] {
                build(d, kind, Completion::IndexOrder)
                    .unwrap()
                    .check_orthogonal()
                    .unwrap();
            }
        }
    }

    #[test]
    fn anchor_coefficients() {
        let t3 = build_topb_with(3, Completion::IndexOrder).unwrap();
        assert_eq!(anchor_coefficient(&t3, 0, FaceRole::F4, 1).unwrap(), int(4));
        let t4 = build_topb_with(4, Completion::IndexOrder).unwrap();
        assert_eq!(anchor_coefficient(&t4, 0, FaceRole::F4, 1).unwrap(), int(9));
        let ab_c = build_asymmetric_ubb(3, Bipartition::SplitC).unwrap();
        let labels: Vec<&str> = ab_c.appended().iter().map(|s| s.label()).collect();
        assert_eq!(
            labels,
            [
                "psi-^(1)_12",
                "psi-^(1)_35",
                "psi-^(1)_(0)4 [c=4]",
                "psi-^(1)_(2)6 [c=4]"
            ]
        );
        let a_bc = build_asymmetric_ubb(3, Bipartition::SplitA).unwrap();
        let labels: Vec<&str> = a_bc.appended().iter().map(|s| s.label()).collect();
        assert_eq!(
            labels,
            [
                "psi-^(1)_24",
                "psi-^(1)_56",
                "psi-^(1)_(0)1 [c=4]",
                "psi-^(1)_(2)3 [c=4]"
            ]
        );
    }

    #[test]
    fn missing_state_sets() {
        let m = missing_states(3, BasisKind::UbbSymmetric).unwrap();
        let labels: Vec<&str> = m.states.iter().map(|s| s.label()).collect();
        assert_eq!(
            labels,
            [
                "|000>",
                "|111>",
                "|222>",
                "psi+^(1)_12",
                "psi+^(1)_34",
                "psi+^(1)_56"
            ]
        );
        assert_eq!(missing_states(4, BasisKind::UbbSymmetric).unwrap().len(), 6);
        assert_eq!(
            missing_states(5, BasisKind::UbbSymmetric).unwrap().len(),
            11
        );
        assert_eq!(missing_states(3, BasisKind::Upb).unwrap().len(), 9);
        assert!(missing_states(3, BasisKind::Topb).is_err());
        for d in 3..=5 {
            let s = stopper(d).unwrap();
            for kind in [BasisKind::Upb, BasisKind::UbbSymmetric] {
                let m = missing_states(d, kind).unwrap();
                assert!(m.states.iter().all(|x| !x.is_orthogonal(&s)));
                let set = build(d, kind, Completion::IndexOrder).unwrap();
                let mut all = set.vectors();
                all.extend(m.vectors());
                assert_eq!(span_dim(&all), d * d * d);
                assert_eq!(set.complement_dim() + 1, m.len());
            }
        }
    }

    #[test]
    fn set_names() {
        assert_eq!(
            "ubb-asym"
                .parse::<SetName>()
                .unwrap()
                .with_cut(Some(Bipartition::SplitC))
                .unwrap(),
            BasisKind::UbbAsymmetric(Bipartition::SplitC)
        );
        assert!(SetName::UbbAsym.with_cut(None).is_err());
        assert!(SetName::Upb.with_cut(Some(Bipartition::SplitA)).is_err());
        assert!("ubb".parse::<SetName>().is_err());
    }
}
