//! Block-cube geometry and the twisted orthogonal product bases.
//!
//! Flat index convention, used everywhere: the coefficient of
//! `|p⟩_A ⊗ |q⟩_B ⊗ |r⟩_C` sits at `p·d² + q·d + r`.
//!
//! Facial blocks come in layers. Layer `l` has a low fixed index `lo` and a
//! high one `hi`; its η vectors live on the window `lo..hi` and its ξ vectors
//! on `lo+1..=hi`. For odd `d`, `lo = (d−1)/2 − l`, `hi = (d−1)/2 + l`; for
//! even `d`, `lo = d/2 − 1 − l`, `hi = d/2 + l` around a central `2×2×2`
//! inner cube.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{tensor_product, Rational, RationalVector};
use crate::parties::{flat_index, split_index};

/// Computational-basis cell `|p⟩|q⟩|r⟩` of the cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasicBlock {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl BasicBlock {
    pub fn flat(&self, d: usize) -> usize {
        flat_index(d, [self.p, self.q, self.r])
    }

    pub fn from_flat(d: usize, idx: usize) -> Self {
        let [p, q, r] = split_index(d, idx);
        Self { p, q, r }
    }
}

impl fmt::Display for BasicBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.p, self.q, self.r)
    }
}

/// Unnormalized state on `(C^d)^{⊗3}` with provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteState {
    d: usize,
    coeffs: RationalVector,
    support: BTreeSet<BasicBlock>,
    label: String,
}

impl TripartiteState {
    pub fn new(d: usize, coeffs: RationalVector, label: impl Into<String>) -> Result<Self> {
        if coeffs.dim() != d * d * d {
            return Err(Error::DimensionMismatch(format!(
                "state of dim {} for d={d}",
                coeffs.dim()
            )));
        }
        let support = coeffs
            .support()
            .into_iter()
            .map(|i| BasicBlock::from_flat(d, i))
            .collect();
        Ok(Self {
            d,
            coeffs,
            support,
            label: label.into(),
        })
    }

    /// `a ⊗ b ⊗ c`.
    pub fn product(
        a: &RationalVector,
        b: &RationalVector,
        c: &RationalVector,
        label: impl Into<String>,
    ) -> Self {
        let d = a.dim();
        assert!(b.dim() == d && c.dim() == d, "factor dimensions differ");
        Self::new(d, tensor_product(&tensor_product(a, b), c), label).expect("product has dim d³")
    }

    pub fn basis(d: usize, p: usize, q: usize, r: usize) -> Self {
        Self::product(
            &RationalVector::unit(d, p),
            &RationalVector::unit(d, q),
            &RationalVector::unit(d, r),
            format!("|{p}{q}{r}>"),
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &RationalVector {
        &self.coeffs
    }

    pub fn support(&self) -> &BTreeSet<BasicBlock> {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn inner(&self, other: &Self) -> Rational {
        self.coeffs.dot(&other.coeffs)
    }

    pub fn norm_sq(&self) -> Rational {
        self.coeffs.norm_sq()
    }

    /// `a·self + b·other`, relabelled.
    pub fn combine(
        &self,
        a: &Rational,
        other: &Self,
        b: &Rational,
        label: impl Into<String>,
    ) -> Self {
        let v = self.coeffs.scale(a).axpy(b, &other.coeffs);
        Self::new(self.d, v, label).expect("same dimension")
    }

    pub fn is_orthogonal(&self, other: &Self) -> bool {
        self.inner(other).is_zero()
    }
}

/// How the remaining vectors of an η/ξ family are completed after the
/// all-ones vector: Gram–Schmidt over the window's standard basis, taken in
/// increasing or decreasing index order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Completion {
    #[default]
    IndexOrder,
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Eta,
    Xi,
    Phi,
}

/// Pairwise-orthogonal local vectors on one index window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFamily {
    pub kind: FamilyKind,
    pub layer: usize,
    pub window: RangeInclusive<usize>,
    pub vectors: Vec<RationalVector>,
}

/// Number of facial layers.
pub fn layer_count(d: usize) -> usize {
    if d % 2 == 1 {
        (d - 1) / 2
    } else {
        d / 2 - 1
    }
}

/// Fixed indices and windows of one facial layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerGeometry {
    pub layer: usize,
    pub lo: usize,
    pub hi: usize,
}

impl LayerGeometry {
    pub fn new(d: usize, layer: usize) -> Result<Self> {
        check_d(d)?;
        let max = layer_count(d);
        if layer == 0 || layer > max {
            return Err(Error::LayerOutOfRange { d, layer, max });
        }
        let (lo, hi) = if d % 2 == 1 {
            let c = (d - 1) / 2;
            (c - layer, c + layer)
        } else {
            (d / 2 - 1 - layer, d / 2 + layer)
        };
        Ok(Self { layer, lo, hi })
    }

    pub fn eta_window(&self) -> RangeInclusive<usize> {
        self.lo..=self.hi - 1
    }

    pub fn xi_window(&self) -> RangeInclusive<usize> {
        self.lo + 1..=self.hi
    }

    /// Family size `w`: each facial block holds `w²` states.
    pub fn width(&self) -> usize {
        self.hi - self.lo
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

fn window_family(
    d: usize,
    kind: FamilyKind,
    layer: usize,
    window: RangeInclusive<usize>,
    completion: Completion,
) -> LocalFamily {
    let mut ones = RationalVector::zeros(d);
    let mut candidates: Vec<RationalVector> =
        window.clone().map(|k| RationalVector::unit(d, k)).collect();
    for k in window.clone() {
        ones = ones.axpy(
            &Rational::from_integer(1.into()),
            &RationalVector::unit(d, k),
        );
    }
    if completion == Completion::Reversed {
        candidates.reverse();
    }
    let target = window.clone().count();
    let mut vectors = vec![ones];
    let mut norms = vec![vectors[0].norm_sq()];
    for c in candidates {
        if vectors.len() == target {
            break;
        }
        let mut w = c.clone();
        for (u, n) in vectors.iter().zip(&norms) {
            let k = c.dot(u);
            if !k.is_zero() {
                w = w.axpy(&-(k / n), u);
            }
        }
        if !w.is_zero() {
            let w = w.primitive();
            norms.push(w.norm_sq());
            vectors.push(w);
        }
    }
    LocalFamily {
        kind,
        layer,
        window,
        vectors,
    }
}

pub fn eta_family(d: usize, layer: usize) -> Result<LocalFamily> {
    eta_family_with(d, layer, Completion::default())
}

pub fn eta_family_with(d: usize, layer: usize, completion: Completion) -> Result<LocalFamily> {
    let g = LayerGeometry::new(d, layer)?;
    Ok(window_family(
        d,
        FamilyKind::Eta,
        layer,
        g.eta_window(),
        completion,
    ))
}

pub fn xi_family(d: usize, layer: usize) -> Result<LocalFamily> {
    xi_family_with(d, layer, Completion::default())
}

pub fn xi_family_with(d: usize, layer: usize, completion: Completion) -> Result<LocalFamily> {
    let g = LayerGeometry::new(d, layer)?;
    Ok(window_family(
        d,
        FamilyKind::Xi,
        layer,
        g.xi_window(),
        completion,
    ))
}

/// `{|d/2−1⟩ + |d/2⟩, |d/2−1⟩ − |d/2⟩}` for even `d`.
pub fn phi_family(d: usize) -> Result<LocalFamily> {
    check_d(d)?;
    if d % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "phi family needs even d, got {d}"
        )));
    }
    let a = RationalVector::unit(d, d / 2 - 1);
    let b = RationalVector::unit(d, d / 2);
    Ok(LocalFamily {
        kind: FamilyKind::Phi,
        layer: 0,
        window: d / 2 - 1..=d / 2,
        vectors: vec![&a + &b, &a - &b],
    })
}

/// Slot contents of a facial block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Lo,
    Hi,
    Eta,
    Xi,
}

/// The six geometric face templates, in the numbering of the odd-`d`
/// construction:
///
/// | role | A   | B   | C   |
/// |------|-----|-----|-----|
/// | F1   | lo  | η   | ξ   |
/// | F2   | η   | hi  | ξ   |
/// | F3   | hi  | ξ   | η   |
/// | F4   | η   | ξ   | lo  |
/// | F5   | ξ   | lo  | η   |
/// | F6   | ξ   | η   | hi  |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceRole {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
}

impl FaceRole {
    pub const ALL: [FaceRole; 6] = [
        FaceRole::F1,
        FaceRole::F2,
        FaceRole::F3,
        FaceRole::F4,
        FaceRole::F5,
        FaceRole::F6,
    ];

    fn slots(self) -> [Slot; 3] {
        use Slot::*;
        match self {
            FaceRole::F1 => [Lo, Eta, Xi],
            FaceRole::F2 => [Eta, Hi, Xi],
            FaceRole::F3 => [Hi, Xi, Eta],
            FaceRole::F4 => [Eta, Xi, Lo],
            FaceRole::F5 => [Xi, Lo, Eta],
            FaceRole::F6 => [Xi, Eta, Hi],
        }
    }

    /// Printed face number at local dimension `d`. At `d = 4` the faces are
    /// numbered differently (B3 = ξ lo η, B4 = ξ η hi, B5 = hi ξ η,
    /// B6 = η ξ lo); everywhere else the number is the role index.
    pub fn label(self, d: usize) -> u8 {
        match (d, self) {
            (4, FaceRole::F3) => 5,
            (4, FaceRole::F4) => 6,
            (4, FaceRole::F5) => 3,
            (4, FaceRole::F6) => 4,
            _ => self as u8 + 1,
        }
    }

    pub fn from_label(d: usize, label: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.label(d) == label)
    }
}

/// One facial block `B_f^{(l)}`: states `ψ(i,j)` stored at `i·w + j`.
#[derive(Clone, Debug)]
pub struct FaceBlock {
    pub role: FaceRole,
    pub label: u8,
    pub layer: usize,
    pub width: usize,
    pub states: Vec<TripartiteState>,
}

impl FaceBlock {
    pub fn state(&self, i: usize, j: usize) -> &TripartiteState {
        &self.states[i * self.width + j]
    }

    /// `ψ(0,0)`, the block's state with non-zero stopper overlap.
    pub fn psi00(&self) -> &TripartiteState {
        &self.states[0]
    }
}

fn build_face(
    d: usize,
    role: FaceRole,
    g: LayerGeometry,
    eta: &LocalFamily,
    xi: &LocalFamily,
) -> FaceBlock {
    let w = g.width();
    let label = role.label(d);
    let mut states = Vec::with_capacity(w * w);
    for i in 0..w {
        for j in 0..w {
            let factors: Vec<RationalVector> = role
                .slots()
                .iter()
                .map(|s| match s {
                    Slot::Lo => RationalVector::unit(d, g.lo),
                    Slot::Hi => RationalVector::unit(d, g.hi),
                    Slot::Eta => eta.vectors[i].clone(),
                    Slot::Xi => xi.vectors[j].clone(),
                })
                .collect();
            states.push(TripartiteState::product(
                &factors[0],
                &factors[1],
                &factors[2],
                format!("B{label}^({})({i},{j})", g.layer),
            ));
        }
    }
    FaceBlock {
        role,
        label,
        layer: g.layer,
        width: w,
        states,
    }
}

/// Twisted orthogonal product basis of `(C^d)^{⊗3}`.
#[derive(Clone, Debug)]
pub struct Topb {
    pub d: usize,
    pub completion: Completion,
    /// Body-diagonal states `|kkk⟩` (without the inner-cube diagonal at even `d`).
    pub diagonal: Vec<TripartiteState>,
    /// `φ_l ⊗ φ_m ⊗ φ_p` at index `4l + 2m + p`; empty for odd `d`.
    pub inner_cube: Vec<TripartiteState>,
    /// Facial blocks ordered by printed face number, then layer.
    pub faces: Vec<FaceBlock>,
}

impl Topb {
    pub fn layers(&self) -> usize {
        layer_count(self.d)
    }

    pub fn face(&self, role: FaceRole, layer: usize) -> Option<&FaceBlock> {
        self.faces
            .iter()
            .find(|f| f.role == role && f.layer == layer)
    }

    pub fn face_by_label(&self, label: u8, layer: usize) -> Option<&FaceBlock> {
        self.faces
            .iter()
            .find(|f| f.label == label && f.layer == layer)
    }

    /// Diagonal states `|kkk⟩` keyed by `k`.
    pub fn diagonal_state(&self, k: usize) -> Option<&TripartiteState> {
        let target = BasicBlock { p: k, q: k, r: k };
        self.diagonal
            .iter()
            .find(|s| s.support().contains(&target) && s.support().len() == 1)
    }

    /// All `d³` states: diagonal, inner cube, then faces.
    pub fn states(&self) -> Vec<&TripartiteState> {
        self.diagonal
            .iter()
            .chain(&self.inner_cube)
            .chain(self.faces.iter().flat_map(|f| &f.states))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
            + self.inner_cube.len()
            + self.faces.iter().map(|f| f.states.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sub-block tiling: for each block (each diagonal cell, the inner cube,
    /// each facial block) the set of basic blocks it occupies.
    pub fn block_supports(&self) -> Vec<(String, BTreeSet<BasicBlock>)> {
        let union = |states: &[TripartiteState]| {
            states
                .iter()
                .flat_map(|s| s.support().iter().copied())
                .collect::<BTreeSet<_>>()
        };
        let mut out: Vec<(String, BTreeSet<BasicBlock>)> = self
            .diagonal
            .iter()
            .map(|s| (s.label().to_string(), s.support().clone()))
            .collect();
        if !self.inner_cube.is_empty() {
            out.push(("inner".into(), union(&self.inner_cube)));
        }
        for f in &self.faces {
            out.push((format!("B{}^({})", f.label, f.layer), union(&f.states)));
        }
        out
    }

    /// Text rendering of block occupancy, one grid per value of the A index
    /// (rows: B index, columns: C index).
    pub fn occupancy_diagram(&self) -> String {
        let d = self.d;
        let mut cell = vec![String::from("?"); d * d * d];
        for (name, blocks) in self.block_supports() {
            let short = if name.starts_with('|') {
                "D".to_string()
            } else if name == "inner" {
                "I".to_string()
            } else {
                name.trim_start_matches('B')
                    .replace("^(", ".")
                    .replace(')', "")
            };
            for b in blocks {
                cell[b.flat(d)] = short.clone();
            }
        }
        let width = cell.iter().map(String::len).max().unwrap_or(1);
        let mut out = String::new();
        for p in 0..d {
            out.push_str(&format!("A={p}\n"));
            for q in 0..d {
                let row: Vec<String> = (0..d)
                    .map(|r| format!("{:>width$}", cell[flat_index(d, [p, q, r])]))
                    .collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

pub fn build_topb(d: usize) -> Result<Topb> {
    build_topb_with(d, Completion::default())
}

pub fn build_topb_with(d: usize, completion: Completion) -> Result<Topb> {
    check_d(d)?;
    let even = d % 2 == 0;
    let skip: &[usize] = if even { &[d / 2 - 1, d / 2] } else { &[] };
    let diagonal = (0..d)
        .filter(|k| !skip.contains(k))
        .map(|k| TripartiteState::basis(d, k, k, k))
        .collect();
    let mut inner_cube = Vec::new();
    if even {
        let phi = phi_family(d)?;
        for l in 0..2 {
            for m in 0..2 {
                for p in 0..2 {
                    inner_cube.push(TripartiteState::product(
                        &phi.vectors[l],
                        &phi.vectors[m],
                        &phi.vectors[p],
                        format!("inner({l},{m},{p})"),
                    ));
                }
            }
        }
    }
    let mut faces = Vec::new();
    for layer in 1..=layer_count(d) {
        let g = LayerGeometry::new(d, layer)?;
        let eta = eta_family_with(d, layer, completion)?;
        let xi = xi_family_with(d, layer, completion)?;
        for role in FaceRole::ALL {
            faces.push(build_face(d, role, g, &eta, &xi));
        }
    }
    faces.sort_by_key(|f| (f.label, f.layer));
    Ok(Topb {
        d,
        completion,
        diagonal,
        inner_cube,
        faces,
    })
}
