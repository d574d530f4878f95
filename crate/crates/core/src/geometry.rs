//! Distance and causal functionals between localized points.
//!
//! A localized point is a positive mean-one Gaussian `χ_p`. With
//! `f^(a) = e^(a) χ_p`, `g^(a) = e^(a) χ_q` and `h^(a) = f^(a) - g^(a)`:
//!
//! * `𝒟_{α,ψ} = η_ab μ₁(h^a) μ₁(h^b) + η_ab Re Δ_{α,ψ}(h^a, h^b)`
//! * `𝒟 = (p - q)² - (κ²/4π²) ln₋(χ_p - χ_q, χ_p - χ_q)`
//! * `𝒞 = ∬ χ_p(x) χ_q(x′) sgn(t - t′) Θ[-(x - x′)²]`

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::integrate::{ordered_pair, QuadratureConfig, QuadratureResult};
use crate::kernels::KernelKind;
use crate::minkowski::{minkowski_interval, synge, Frame, PhysicalConstants, SpacetimePoint};
use crate::special::EULER_GAMMA;
use crate::state::{dm_terms, log_minus_scalar, mu2, DMStateParams};
use crate::testfn::{GaussianBump, ScalarProfile, VectorSmearing};
use crate::weyl::{Pairing, SigmaTable, WeylElement};

/// A positive, mean-one Gaussian standing in for the event at its center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalizedPoint {
    pub bump: GaussianBump,
}

impl LocalizedPoint {
    pub fn new(center: SpacetimePoint, width: f64) -> Result<Self, Error> {
        Ok(LocalizedPoint {
            bump: GaussianBump::new(center, width)?,
        })
    }

    pub fn nominal_point(&self) -> SpacetimePoint {
        self.bump.center
    }

    fn frame_smearings(&self, frame: &Frame) -> [VectorSmearing; 4] {
        VectorSmearing::frame_smearings(&self.bump, frame)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceBreakdown {
    pub classical: f64,
    pub quantum: f64,
    pub total: f64,
    pub error: f64,
    pub converged: bool,
}

impl DistanceBreakdown {
    fn new(classical: f64, quantum: QuadratureResult<f64>) -> Self {
        DistanceBreakdown {
            classical,
            quantum: quantum.value,
            total: classical + quantum.value,
            error: quantum.error,
            converged: quantum.converged,
        }
    }
}

fn eta_ab(a: usize) -> f64 {
    if a == 0 {
        -1.0
    } else {
        1.0
    }
}

/// `η_ab ∬ x^μ x′^ν h^a_μ h^b_ν` from first moments; equals `(p - q)²`.
pub fn classical_term(p: &LocalizedPoint, q: &LocalizedPoint) -> f64 {
    classical_term_in(p, q, &Frame::standard())
}

pub fn classical_term_in(p: &LocalizedPoint, q: &LocalizedPoint, frame: &Frame) -> f64 {
    let fp = p.frame_smearings(frame);
    let fq = q.frame_smearings(frame);
    let m: [f64; 4] = std::array::from_fn(|a| fp[a].moment1() - fq[a].moment1());
    (0..4).map(|a| eta_ab(a) * m[a] * m[a]).sum()
}

/// `𝒟_{α,ψ}(χ_p, χ_q)` in the standard frame.
pub fn distance_alpha(
    p: &LocalizedPoint,
    q: &LocalizedPoint,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> DistanceBreakdown {
    distance_alpha_in(p, q, params, &Frame::standard(), cfg)
}

pub fn distance_alpha_in(
    p: &LocalizedPoint,
    q: &LocalizedPoint,
    params: &DMStateParams,
    frame: &Frame,
    cfg: &QuadratureConfig,
) -> DistanceBreakdown {
    let fp = p.frame_smearings(frame);
    let fq = q.frame_smearings(frame);
    let h: Vec<VectorSmearing> = (0..4).map(|a| &fp[a] - &fq[a]).collect();
    // η_ab is diagonal in frame indices
    let mut quantum = QuadratureResult::zero();
    for (a, ha) in h.iter().enumerate() {
        let t = dm_terms(ha, ha, params, cfg);
        let part = QuadratureResult {
            value: t.log_term + t.mean_term + t.sigma_psi_term,
            error: t.error,
            converged: t.converged,
            ..QuadratureResult::zero()
        };
        quantum = quantum.add_scaled(eta_ab(a), &part);
    }
    DistanceBreakdown::new(classical_term_in(p, q, frame), quantum)
}

/// The same second moment taken in the positive state `ω`, with the Krein
/// involution inserted. Diagnostic only.
pub fn distance_omega(
    p: &LocalizedPoint,
    q: &LocalizedPoint,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> DistanceBreakdown {
    let frame = Frame::standard();
    let fp = p.frame_smearings(&frame);
    let fq = q.frame_smearings(&frame);
    let mut quantum = QuadratureResult::zero();
    for a in 0..4 {
        let h = &fp[a] - &fq[a];
        let m = mu2(&h, &h, params, cfg);
        let part = QuadratureResult {
            value: m.value.re,
            error: m.error,
            converged: m.converged,
            ..QuadratureResult::zero()
        };
        quantum = quantum.add_scaled(eta_ab(a), &part);
    }
    DistanceBreakdown::new(classical_term(p, q), quantum)
}

/// `𝒟(χ_p, χ_q) = lim_{α→∞} 𝒟_{α,ψ}`.
pub fn distance(
    p: &LocalizedPoint,
    q: &LocalizedPoint,
    constants: &PhysicalConstants,
    cfg: &QuadratureConfig,
) -> DistanceBreakdown {
    let k2 = constants.kappa_sq();
    let classical = classical_term(p, q);
    if k2 == 0.0 {
        return DistanceBreakdown::new(classical, QuadratureResult::zero());
    }
    let phi = ScalarProfile::difference(p.bump, q.bump);
    let quantum = log_minus_scalar(&phi, &phi, cfg).scale(-k2 / (4.0 * PI * PI));
    DistanceBreakdown::new(classical, quantum)
}

/// `2σ(p,q) + (8ℓ²/π) ln[|σ(p,q)|/ℓ²]`.
pub fn corrected_synge(
    p: &SpacetimePoint,
    q: &SpacetimePoint,
    constants: &PhysicalConstants,
) -> Result<f64, Error> {
    let s = synge(p, q);
    if s == 0.0 {
        return Err(Error::NullWorldFunction);
    }
    let l2 = constants.planck_length().powi(2);
    if l2 == 0.0 {
        return Ok(2.0 * s);
    }
    Ok(2.0 * s + 8.0 * l2 / PI * (s.abs() / l2).ln())
}

/// Bump width `a = 2c/ℓ²` with `c = e^{2(1-γ)}/4`, the family for which the
/// closed form above was proposed.
pub fn synge_family_width(constants: &PhysicalConstants) -> f64 {
    let c = (2.0 * (1.0 - EULER_GAMMA)).exp() / 4.0;
    2.0 * c / constants.planck_length().powi(2)
}

/// Width `a = 2c/ℓ²` with `c = e^{1-γ}/4`. For this family the narrow-width
/// limit of the quantum correction is exactly `(κ²/2π²) ln(|s|/2ℓ²)`, since
/// the coincident Gaussian average is `E ln|y²| = ln s² + 1 - γ`.
pub fn minimal_variance_width(constants: &PhysicalConstants) -> f64 {
    let c = (1.0 - EULER_GAMMA).exp() / 4.0;
    2.0 * c / constants.planck_length().powi(2)
}

/// Narrow-width limit of `∬ φ ln|(x-x′)²| φ` for `φ = χ_p - χ_q` of equal
/// width `a`: `-2 ln(a |(p-q)²|) + 2(1 - γ)`.
pub fn minimal_variance_limit(width: f64, interval: f64) -> f64 {
    -2.0 * (width * interval.abs()).ln() + 2.0 * (1.0 - EULER_GAMMA)
}

/// `𝒞(χ_p, χ_q)`, the light-cone pair integral.
pub fn causal(
    p: &LocalizedPoint,
    q: &LocalizedPoint,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let near_cone = {
        let d = p.bump.center.displacement(&q.bump.center);
        let s = (p.bump.variance() + q.bump.variance()).sqrt();
        (d.0[0].abs() - d.spatial_norm()).abs() < 6.0 * s
    };
    if near_cone {
        let boosted = QuadratureConfig {
            max_evals: cfg.max_evals.saturating_mul(4),
            ..*cfg
        };
        ordered_pair(KernelKind::Lightcone, &p.bump, &q.bump, &boosted)
    } else {
        ordered_pair(KernelKind::Lightcone, &p.bump, &q.bump, cfg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Future,
    Past,
    Spacelike,
    Fuzzy,
}

/// Decision band of three error estimates around `0` and `±1`.
pub fn classify(value: f64, error: f64) -> CausalClass {
    let band = 3.0 * error;
    if value.abs() <= band {
        CausalClass::Spacelike
    } else if (value - 1.0).abs() <= band {
        CausalClass::Future
    } else if (value + 1.0).abs() <= band {
        CausalClass::Past
    } else {
        CausalClass::Fuzzy
    }
}

/// `𝒞` through the algebra: `-(4πi/κ²) η_ab ln τ(W(f^a) W(g^b) W(-f^a-g^b))`.
pub fn causal_via_weyl(
    p: &LocalizedPoint,
    q: &LocalizedPoint,
    params: &DMStateParams,
    pairing: Pairing,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<f64>, Error> {
    let k2 = params.kappa_sq();
    if k2 == 0.0 {
        return Err(Error::InvalidConstant(k2));
    }
    let frame = Frame::standard();
    let fp = p.frame_smearings(&frame);
    let fq = q.frame_smearings(&frame);
    let table = SigmaTable::new(params.constants, pairing, *cfg);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    // η_ab is diagonal in frame indices
    for (a, (f, g)) in fp.iter().zip(&fq).enumerate() {
        let triple = WeylElement::generator(f.clone())
            .mul(&WeylElement::generator(g.clone()), &table)
            .mul(&WeylElement::generator(-&(f + g)), &table);
        let tau = triple.eval_tau(params, cfg)?;
        let modulus = tau.value.norm();
        let theta = tau.value.arg();
        // ln τ = ln|τ| + iθ; a unit-modulus prediction off by more than
        // the error, or a phase at the cut, makes the principal log unsafe
        if (modulus - 1.0).abs() > 2.0 * tau.error + 1e-9 || theta.abs() > 3.0 {
            return Err(Error::BranchCut(theta));
        }
        let w = eta_ab(a) * 4.0 * PI / k2;
        value += w * theta;
        error += w.abs() * tau.error;
        converged &= tau.converged;
    }
    Ok(QuadratureResult {
        value,
        error,
        method: crate::integrate::Method::Reduced2D,
        evals: 0,
        converged,
    })
}

/// Interval classification of the centers: `+1` future, `-1` past, `0` otherwise.
pub fn sharp_causal(p: &SpacetimePoint, q: &SpacetimePoint) -> i8 {
    crate::kernels::lightcone(p, q)
}

/// `(p - q)²` of the centers.
pub fn center_interval(p: &LocalizedPoint, q: &LocalizedPoint) -> f64 {
    minkowski_interval(&p.bump.center, &q.bump.center)
}
