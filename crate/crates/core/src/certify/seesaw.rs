//! Alternating maximisation of `⟨ψ|ℙ|ψ⟩ / ⟨ψ|ψ⟩` over product or
//! biseparable `ψ`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::sub_rng;
use crate::analysis::SubspaceProjector;
use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational, RationalVector};
use crate::parties::{flat_index, Bipartition};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub convergence_tol: f64,
    pub overlap_threshold: f64,
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            max_iters: 500,
            convergence_tol: 1e-12,
            overlap_threshold: 1.0 - 1e-6,
            seed: 0,
        }
    }
}

impl SeesawConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument(
                "restarts and max_iters must be positive".into(),
            ));
        }
        if !(0.0 < self.convergence_tol
            && self.convergence_tol < self.overlap_threshold
            && self.overlap_threshold < 1.0)
        {
            return Err(Error::InvalidArgument(
                "need 0 < convergence_tol < overlap_threshold < 1".into(),
            ));
        }
        Ok(())
    }
}

/// Best state found by a search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub max_overlap: f64,
    /// Overlap of the rationalised best state, evaluated exactly.
    pub exact_overlap: String,
    pub exact_overlap_f64: f64,
    /// Normalised factors of the best state as `[re, im]` pairs.
    pub factors: Vec<Vec<[f64; 2]>>,
    pub best_restart: usize,
    pub iterations: usize,
    /// No update in any run lowered the overlap by more than the tolerance.
    pub monotone: bool,
    pub restarts: usize,
    pub seed: u64,
}

impl SearchOutcome {
    /// The exact re-evaluation agrees with the float to within `1e−6`.
    pub fn sound(&self) -> bool {
        (self.exact_overlap_f64 - self.max_overlap).abs() <= 1e-6
    }
}

/// Seesaw over `a ⊗ b ⊗ c`.
pub fn product_overlap_search(p: &SubspaceProjector, cfg: &SeesawConfig) -> Result<SearchOutcome> {
    let d = p.d;
    let layout = Layout::new(vec![d, d, d], |f| f);
    search(p, &layout, cfg)
}

/// Seesaw over `x ⊗ y`, with `x` on the lone party of `cut` and `y` on the
/// pair (in A, B, C order).
pub fn biseparable_overlap_search(
    p: &SubspaceProjector,
    cut: Bipartition,
    cfg: &SeesawConfig,
) -> Result<SearchOutcome> {
    let d = p.d;
    let single = cut.single().index();
    let [x, y] = cut.pair().map(|q| q.index());
    let layout = Layout::new(vec![d, d * d], move |f| {
        let (s, pair) = (f / (d * d), f % (d * d));
        let mut t = [0; 3];
        t[single] = s;
        t[x] = pair / d;
        t[y] = pair % d;
        flat_index(d, t)
    });
    search(p, &layout, cfg)
}

/// Factor dimensions and the map from factor-ordered to flat indices.
struct Layout {
    dims: Vec<usize>,
    to_flat: Vec<usize>,
}

impl Layout {
    fn new(dims: Vec<usize>, map: impl Fn(usize) -> usize) -> Self {
        let n: usize = dims.iter().product();
        Self {
            to_flat: (0..n).map(map).collect(),
            dims,
        }
    }

    fn len(&self) -> usize {
        self.to_flat.len()
    }

    /// `(digit of factor k, index over the remaining factors)`.
    fn split(&self, f: usize, k: usize) -> (usize, usize) {
        let after: usize = self.dims[k + 1..].iter().product();
        let digit = (f / after) % self.dims[k];
        let before = f / (after * self.dims[k]);
        (digit, before * after + f % after)
    }
}

fn tensor(factors: &[Vec<Complex64>]) -> Vec<Complex64> {
    factors
        .iter()
        .fold(vec![Complex64::new(1.0, 0.0)], |acc, f| {
            acc.iter()
                .flat_map(|a| f.iter().map(move |b| a * b))
                .collect()
        })
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= n;
    }
}

struct Run {
    overlap: f64,
    factors: Vec<Vec<Complex64>>,
    iterations: usize,
    monotone: bool,
}

fn search(p: &SubspaceProjector, layout: &Layout, cfg: &SeesawConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let n = layout.len();
    if p.matrix.rows() != n {
        return Err(Error::DimensionMismatch(
            "projector does not match the layout".into(),
        ));
    }
    let dense = p.matrix.to_f64();
    // Projector in factor order.
    let pf: Vec<f64> = (0..n * n)
        .map(|ij| dense[layout.to_flat[ij / n] * n + layout.to_flat[ij % n]])
        .collect();
    let splits: Vec<Vec<(usize, usize)>> = (0..layout.dims.len())
        .map(|k| (0..n).map(|f| layout.split(f, k)).collect())
        .collect();
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| single_run(&pf, layout, &splits, cfg, r))
        .collect();
    let monotone = runs.iter().all(|r| r.monotone);
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .fold(None::<(usize, &Run)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.overlap >= r.overlap => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");
    let exact = exact_overlap(p, layout, &best.factors);
    Ok(SearchOutcome {
        max_overlap: best.overlap,
        exact_overlap_f64: exact.to_f64().unwrap_or(f64::NAN),
        exact_overlap: format_rational(&exact),
        factors: best
            .factors
            .iter()
            .map(|f| f.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        best_restart,
        iterations: best.iterations,
        monotone,
        restarts: cfg.restarts,
        seed: cfg.seed,
    })
}

fn single_run(
    pf: &[f64],
    layout: &Layout,
    splits: &[Vec<(usize, usize)>],
    cfg: &SeesawConfig,
    restart: usize,
) -> Run {
    let n = layout.len();
    let mut rng = sub_rng(cfg.seed, restart as u64);
    let mut factors: Vec<Vec<Complex64>> = layout
        .dims
        .iter()
        .map(|&dim| {
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| {
                    Complex64::new(
                        StandardNormal.sample(&mut rng),
                        StandardNormal.sample(&mut rng),
                    )
                })
                .collect();
            normalize(&mut v);
            v
        })
        .collect();
    let mut overlap = f64::NEG_INFINITY;
    let mut monotone = true;
    let mut iterations = 0;
    for it in 0..cfg.max_iters {
        iterations = it + 1;
        let sweep_start = overlap;
        for k in 0..factors.len() {
            let others: Vec<Vec<Complex64>> = factors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, f)| f.clone())
                .collect();
            let w = tensor(&others);
            let dim = layout.dims[k];
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            for f in 0..n {
                let (i, u) = splits[k][f];
                let cu = w[u].conj();
                if cu == Complex64::zero() {
                    continue;
                }
                for g in 0..n {
                    let x = pf[f * n + g];
                    if x != 0.0 {
                        let (j, v) = splits[k][g];
                        m[(i, j)] += cu * x * w[v];
                    }
                }
            }
            let eig = SymmetricEigen::new(m);
            let (top, &value) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("nonempty spectrum");
            let mut v: Vec<Complex64> = eig.eigenvectors.column(top).iter().copied().collect();
            normalize(&mut v);
            if value < overlap - cfg.convergence_tol {
                monotone = false;
            }
            debug_assert!(value >= overlap - 1e-9, "seesaw step lowered the overlap");
            factors[k] = v;
            overlap = value;
        }
        if overlap - sweep_start < cfg.convergence_tol {
            break;
        }
    }
    Run {
        overlap,
        factors,
        iterations,
        monotone,
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return Rational::zero();
    }
    let neg = x < 0.0;
    let mut y = x.abs();
    // Convergents h/k of the continued fraction.
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let max = max_den as u128;
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e18 {
            break;
        }
        let a = a as u128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max {
            // Best semiconvergent within the bound.
            let t = (max - k0) / k1;
            let (hs, ks) = (t * h1 + h0, t * k1 + k0);
            let err_s = (hs as f64 / ks as f64 - x.abs()).abs();
            let err_c = (h1 as f64 / k1 as f64 - x.abs()).abs();
            if ks > 0 && err_s < err_c {
                (h1, k1) = (hs, ks);
            }
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a as f64;
        if frac < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    let r = Rational::new(BigInt::from(h1), BigInt::from(k1));
    if neg {
        -r
    } else {
        r
    }
}

const MAX_DEN: u64 = 1_000_000;

/// `⟨ψ|ℙ|ψ⟩ / ⟨ψ|ψ⟩` for the rationalised state; with `ψ = x + iy` and `ℙ`
/// real symmetric this is `(xᵀℙx + yᵀℙy) / (‖x‖² + ‖y‖²)`.
fn exact_overlap(p: &SubspaceProjector, layout: &Layout, factors: &[Vec<Complex64>]) -> Rational {
    let rational: Vec<Vec<(Rational, Rational)>> = factors
        .iter()
        .map(|f| {
            f.iter()
                .map(|z| (rationalize(z.re, MAX_DEN), rationalize(z.im, MAX_DEN)))
                .collect()
        })
        .collect();
    let one = (Rational::from_integer(1.into()), Rational::zero());
    let psi = rational.iter().fold(vec![one], |acc, f| {
        acc.iter()
            .flat_map(|(ar, ai)| {
                f.iter()
                    .map(move |(br, bi)| (ar * br - ai * bi, ar * bi + ai * br))
            })
            .collect()
    });
    let n = layout.len();
    let mut re = vec![Rational::zero(); n];
    let mut im = vec![Rational::zero(); n];
    for (f, (r, i)) in psi.into_iter().enumerate() {
        re[layout.to_flat[f]] = r;
        im[layout.to_flat[f]] = i;
    }
    let (re, im) = (RationalVector::new(re), RationalVector::new(im));
    let norm = re.norm_sq() + im.norm_sq();
    if norm.is_zero() {
        return Rational::zero();
    }
    let pr = p.matrix.mul_vector(&re).expect("dimensions match");
    let pi = p.matrix.mul_vector(&im).expect("dimensions match");
    (re.dot(&pr) + im.dot(&pi)) / norm
}
