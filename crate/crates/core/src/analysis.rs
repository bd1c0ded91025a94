//! Visibility, which-way distinguishability, entanglement and the duality sum.
//!
//! Distinguishability comes in two flavours that must agree on ideal data:
//!
//! - geometric: project both markers onto the β basis chosen so the two
//!   probability differences coincide, and average those differences;
//! - likelihood: `D = 2·L − 1` where `L` is the probability of guessing the path
//!   correctly from a marker measurement.

use std::f64::consts::{FRAC_PI_4, PI};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::interferometer::MarkerPair;
use crate::linalg::Basis2;
use crate::{Error, Result};

pub const PROB_TOL: f64 = 1e-9;
pub const MIN_SEARCH_GRID: usize = 64;

/// Joint probabilities `p(|β±⟩_A, |0/1⟩_B)` of a marker-basis / path measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointProbs {
    pub p_bp_0: f64,
    pub p_bm_0: f64,
    pub p_bp_1: f64,
    pub p_bm_1: f64,
}

impl JointProbs {
    pub fn new(p_bp_0: f64, p_bm_0: f64, p_bp_1: f64, p_bm_1: f64) -> Result<Self> {
        let jp = Self {
            p_bp_0,
            p_bm_0,
            p_bp_1,
            p_bm_1,
        };
        let all = jp.as_array();
        if all.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("joint probabilities"));
        }
        if let Some(p) = all
            .iter()
            .find(|&&p| !(-PROB_TOL..=1.0 + PROB_TOL).contains(&p))
        {
            return Err(Error::InvalidProbabilities(format!(
                "entry {p} outside [0, 1]"
            )));
        }
        let sum: f64 = all.iter().sum();
        if (sum - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidProbabilities(format!("sum {sum} != 1")));
        }
        Ok(jp)
    }

    /// Computational-basis populations `|00⟩, |01⟩, |10⟩, |11⟩` after the marker
    /// basis has been rotated so that `|β₊⟩ → |0⟩_A` and `|β₋⟩ → |1⟩_A`.
    pub fn from_rotated_populations(diag: [f64; 4]) -> Result<Self> {
        Self::new(diag[0], diag[1], diag[2], diag[3])
    }

    /// `[p(β₊,0), p(β₋,0), p(β₊,1), p(β₋,1)]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p_bp_0, self.p_bm_0, self.p_bp_1, self.p_bm_1]
    }
}

/// Exact joint probabilities for the marked state measured in `basis`:
/// `p(β, b) = ½ ⟨β|m_b⟩²`.
pub fn ideal_joint_probabilities(markers: &MarkerPair, basis: &Basis2) -> JointProbs {
    let dot = |u: [f64; 2], v: [f64; 2]| u[0] * v[0] + u[1] * v[1];
    let (bp, bm) = (basis.plus(), basis.minus());
    let (mp, mm) = (markers.plus(), markers.minus());
    JointProbs {
        p_bp_0: 0.5 * dot(bp, mp).powi(2),
        p_bm_0: 0.5 * dot(bm, mp).powi(2),
        p_bp_1: 0.5 * dot(bp, mm).powi(2),
        p_bm_1: 0.5 * dot(bm, mm).powi(2),
    }
}

/// Expansion coefficients `|m₊⟩ = γ₊|β₊⟩ + γ₋|β₋⟩`, `|m₋⟩ = δ₊|β₊⟩ + δ₋|β₋⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCoeffs {
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
}

/// V = |⟨m₊|m₋⟩| = |cos φ|.
pub fn visibility_analytic(markers: &MarkerPair) -> f64 {
    markers.overlap().abs()
}

/// β basis at `θ = (φ₊ + φ₋)/2 − π/4`.
pub fn beta_basis(markers: &MarkerPair) -> Basis2 {
    Basis2::new(0.5 * (markers.phi_plus + markers.phi_minus) - FRAC_PI_4)
}

/// `γ₊ = δ₋ = cos(π/4 − φ/2)`, `γ₋ = δ₊ = sin(π/4 − φ/2)`.
///
/// These are the magnitudes of the projections onto [`beta_basis`]; the raw
/// inner products `⟨β₋|m₊⟩` and `⟨β₋|m₋⟩` carry an extra sign.
pub fn decompose(markers: &MarkerPair) -> DecompositionCoeffs {
    let (s, c) = (FRAC_PI_4 - 0.5 * markers.marker_angle()).sin_cos();
    DecompositionCoeffs {
        gamma_plus: c,
        gamma_minus: s,
        delta_plus: s,
        delta_minus: c,
    }
}

fn clamp_unit(name: &str, v: f64) -> f64 {
    let clamped = v.clamp(0.0, 1.0);
    if clamped != v {
        log::debug!("{name} = {v} clamped to {clamped}");
    }
    clamped
}

/// Average of the two probability differences `||γ₊|² − |δ₊|²|` and
/// `||δ₋|² − |γ₋|²|`, with `|γ₊|² = 2p(β₊,0)` and so on.
pub fn distinguishability_geometric(jp: &JointProbs) -> f64 {
    let gp = 2.0 * jp.p_bp_0;
    let gm = 2.0 * jp.p_bm_0;
    let dp = 2.0 * jp.p_bp_1;
    let dm = 2.0 * jp.p_bm_1;
    clamp_unit("D_geo", 0.5 * ((gp - dp).abs() + (dm - gm).abs()))
}

/// `L = Σ_i max{p(W_i, 0), p(W_i, 1)}` over the two marker outcomes.
pub fn likelihood(jp: &JointProbs) -> f64 {
    jp.p_bp_0.max(jp.p_bp_1) + jp.p_bm_0.max(jp.p_bm_1)
}

/// `D = 2L − 1`.
pub fn distinguishability_likelihood(l: f64) -> Result<f64> {
    if !l.is_finite() || !(0.5 - PROB_TOL..=1.0 + PROB_TOL).contains(&l) {
        return Err(Error::LikelihoodOutOfRange(l));
    }
    Ok(clamp_unit("D_lik", 2.0 * l - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableSearch {
    /// Basis angle of the best measurement, in `[0, π)`.
    pub theta: f64,
    pub likelihood: f64,
}

/// Scans real-plane projective marker measurements at `θ = kπ/n`, `k < n`, then
/// polishes the best grid angle with a golden-section search over the
/// neighbouring grid cells.
///
/// The likelihood landscape is π/2-periodic in `θ` (shifting by π/2 only swaps
/// the roles of `|β₊⟩` and `|β₋⟩`), so the maximizer is unique modulo π/2.
pub fn optimal_observable_search(
    markers: &MarkerPair,
    grid_size: usize,
) -> Result<ObservableSearch> {
    if grid_size < MIN_SEARCH_GRID {
        return Err(Error::GridTooSmall(grid_size, MIN_SEARCH_GRID));
    }
    let at = |theta: f64| likelihood(&ideal_joint_probabilities(markers, &Basis2::new(theta)));
    let step = PI / grid_size as f64;
    let mut best = ObservableSearch {
        theta: 0.0,
        likelihood: f64::NEG_INFINITY,
    };
    for k in 0..grid_size {
        let theta = step * k as f64;
        let l = at(theta);
        if l > best.likelihood {
            best = ObservableSearch {
                theta,
                likelihood: l,
            };
        }
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (best.theta - step, best.theta + step);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (at(x1), at(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = at(x1);
        }
    }
    let theta = 0.5 * (lo + hi);
    let l = at(theta);
    if l > best.likelihood {
        best = ObservableSearch {
            theta: theta.rem_euclid(PI),
            likelihood: l,
        };
    }
    Ok(best)
}

/// Distance between two angles modulo `period`.
pub fn angle_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Entanglement (in bits) of the marked state:
/// `E = −Σ± ((1 ± cos φ)/2) log₂((1 ± cos φ)/2)`.
pub fn entanglement(markers: &MarkerPair) -> f64 {
    let c = markers.overlap();
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    (term(0.5 * (1.0 - c)) + term(0.5 * (1.0 + c))).clamp(0.0, 1.0)
}

pub fn duality_sum(visibility: f64, distinguishability: f64) -> f64 {
    distinguishability * distinguishability + visibility * visibility
}

/// How visibility is read off a sampled fringe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum VisibilityEstimator {
    /// Least-squares fit of `a + b·cos(ϕ + c)`; `V = |b|/a`.
    #[default]
    SinusoidFit,
    /// `(I_max − I_min)/(I_max + I_min)` over the raw samples.
    MaxMin,
}

/// Fitted `I(ϕ) = offset + amplitude·cos(ϕ + phase)`, `amplitude ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeFit {
    pub offset: f64,
    pub amplitude: f64,
    pub phase: f64,
}

impl FringeFit {
    pub fn visibility(&self) -> f64 {
        clamp_unit("V", self.amplitude / self.offset)
    }
}

/// Linear least squares on the design `[1, cos ϕ, sin ϕ]`.
pub fn fit_fringe(samples: &[(f64, f64)]) -> Result<FringeFit> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    if samples
        .iter()
        .any(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(Error::NonFinite("fringe samples"));
    }
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for &(phase, value) in samples {
        let row = Vector3::new(1.0, phase.cos(), phase.sin());
        normal += row * row.transpose();
        rhs += row * value;
    }
    let eig = normal.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if hi <= 0.0 || lo / hi < 1e-12 {
        return Err(Error::FitFailure("singular normal equations"));
    }
    let x = normal
        .cholesky()
        .ok_or(Error::FitFailure("singular normal equations"))?
        .solve(&rhs);
    let (offset, p, q) = (x[0], x[1], x[2]);
    if offset <= 0.0 {
        return Err(Error::FitFailure("non-positive mean population"));
    }
    // p cos ϕ + q sin ϕ = r cos(ϕ + c) with r = √(p² + q²), c = atan2(−q, p).
    Ok(FringeFit {
        offset,
        amplitude: p.hypot(q),
        phase: (-q).atan2(p),
    })
}

pub fn visibility_from_fringe(samples: &[(f64, f64)]) -> Result<f64> {
    visibility_with(samples, VisibilityEstimator::SinusoidFit)
}

pub fn visibility_with(samples: &[(f64, f64)], estimator: VisibilityEstimator) -> Result<f64> {
    match estimator {
        VisibilityEstimator::SinusoidFit => Ok(fit_fringe(samples)?.visibility()),
        VisibilityEstimator::MaxMin => {
            if samples.len() < 2 {
                return Err(Error::TooFewSamples {
                    needed: 2,
                    got: samples.len(),
                });
            }
            let max = samples
                .iter()
                .map(|s| s.1)
                .fold(f64::NEG_INFINITY, f64::max);
            let min = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            if max + min <= 0.0 {
                return Err(Error::FitFailure("non-positive populations"));
            }
            Ok(clamp_unit("V", (max - min) / (max + min)))
        }
    }
}

/// One row of a marker-angle sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityRecord {
    pub phi: f64,
    #[serde(rename = "V")]
    pub visibility: f64,
    #[serde(rename = "D_geo")]
    pub d_geo: f64,
    #[serde(rename = "D_lik")]
    pub d_lik: f64,
    #[serde(rename = "E")]
    pub entanglement: f64,
    pub duality_sum: f64,
}

impl DualityRecord {
    /// Builds a row; `duality_sum` uses the geometric distinguishability.
    pub fn new(phi: f64, visibility: f64, d_geo: f64, d_lik: f64, entanglement: f64) -> Self {
        Self {
            phi,
            visibility,
            d_geo,
            d_lik,
            entanglement,
            duality_sum: duality_sum(visibility, d_geo),
        }
    }
}
