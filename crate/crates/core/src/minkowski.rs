//! Metric conventions, frames and physical constants.
//!
//! Signature is `(-,+,+,+)`: `x² = -t² + |x⃗|²`, so a negative interval is
//! timelike, a positive one spacelike. Units are `c = 1`; lengths default to
//! the Planck length.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Diagonal of the Minkowski metric. Numerically `η_μν = η^μν`.
pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Tolerance on `u·η·u = -1` for the Krein vector.
pub const UNIT_TIMELIKE_TOL: f64 = 1e-12;

/// A symmetric 4×4 matrix contracting two covector indices, e.g. `η^μν`.
pub type Contraction = Matrix4<f64>;

/// `η^μν` as a contraction matrix.
pub fn inverse_metric() -> Contraction {
    Matrix4::from_diagonal(&ETA.into())
}

/// An event `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpacetimePoint(pub [f64; 4]);

/// A covector `v_μ` (lower index).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourCovector(pub [f64; 4]);

/// A vector `u^μ` (upper index).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FourVector(pub [f64; 4]);

impl SpacetimePoint {
    pub const ORIGIN: SpacetimePoint = SpacetimePoint([0.0; 4]);

    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        SpacetimePoint([t, x, y, z])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Displacement `self - other` as a vector.
    pub fn displacement(&self, other: &SpacetimePoint) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - other.0[i]))
    }

    pub fn translate(&self, by: &FourVector) -> SpacetimePoint {
        SpacetimePoint(std::array::from_fn(|i| self.0[i] + by.0[i]))
    }
}

impl FourVector {
    pub const REST: FourVector = FourVector([1.0, 0.0, 0.0, 0.0]);

    /// Unit timelike vector boosted with rapidity `beta` along spatial axis
    /// `axis` (1, 2 or 3).
    pub fn boosted(beta: f64, axis: usize) -> Self {
        let mut u = [0.0; 4];
        u[0] = beta.cosh();
        u[axis] = beta.sinh();
        FourVector(u)
    }

    /// `u·η·u`.
    pub fn norm_sq(&self) -> f64 {
        (0..4).map(|i| ETA[i] * self.0[i] * self.0[i]).sum()
    }

    /// Spatial Euclidean length.
    pub fn spatial_norm(&self) -> f64 {
        (self.0[1] * self.0[1] + self.0[2] * self.0[2] + self.0[3] * self.0[3]).sqrt()
    }

    /// Index lowered with `η`.
    pub fn lower(&self) -> FourCovector {
        FourCovector(std::array::from_fn(|i| ETA[i] * self.0[i]))
    }
}

impl FourCovector {
    pub const ZERO: FourCovector = FourCovector([0.0; 4]);

    /// Unit covector `δ_μ^a`.
    pub fn unit(a: usize) -> Self {
        let mut v = [0.0; 4];
        v[a] = 1.0;
        FourCovector(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `v_μ x^μ`.
    pub fn pair(&self, x: &SpacetimePoint) -> f64 {
        (0..4).map(|i| self.0[i] * x.0[i]).sum()
    }

    /// `v_μ C^μν w_ν`.
    pub fn contract(&self, c: &Contraction, w: &FourCovector) -> f64 {
        let mut s = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                s += self.0[mu] * c[(mu, nu)] * w.0[nu];
            }
        }
        s
    }

    /// `v_μ η^μν w_ν`.
    pub fn dot(&self, w: &FourCovector) -> f64 {
        (0..4).map(|i| ETA[i] * self.0[i] * w.0[i]).sum()
    }

    pub fn scale(&self, c: f64) -> FourCovector {
        FourCovector(self.0.map(|x| x * c))
    }
}

impl Add for FourCovector {
    type Output = FourCovector;
    fn add(self, rhs: FourCovector) -> FourCovector {
        FourCovector(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for FourCovector {
    type Output = FourCovector;
    fn sub(self, rhs: FourCovector) -> FourCovector {
        FourCovector(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for FourCovector {
    type Output = FourCovector;
    fn neg(self) -> FourCovector {
        FourCovector(self.0.map(|x| -x))
    }
}

impl Mul<f64> for FourCovector {
    type Output = FourCovector;
    fn mul(self, rhs: f64) -> FourCovector {
        self.scale(rhs)
    }
}

/// Signed squared interval `-(Δt)² + |Δx⃗|²`.
pub fn minkowski_interval(p: &SpacetimePoint, q: &SpacetimePoint) -> f64 {
    interval_of(&p.displacement(q))
}

/// Signed squared length of a displacement.
pub fn interval_of(d: &FourVector) -> f64 {
    d.norm_sq()
}

/// Synge world function, half the squared interval.
pub fn synge(p: &SpacetimePoint, q: &SpacetimePoint) -> f64 {
    0.5 * minkowski_interval(p, q)
}

/// `η^μν + 2 u^μ u^ν`, positive definite for unit timelike `u`.
pub fn krein_matrix(u: &FourVector) -> Result<Contraction, Error> {
    check_unit_timelike(u)?;
    Ok(Matrix4::from_fn(|mu, nu| {
        let eta = if mu == nu { ETA[mu] } else { 0.0 };
        eta + 2.0 * u.0[mu] * u.0[nu]
    }))
}

/// Mixed-index involution `δ_μ^ν + 2 u_μ u^ν` acting on covectors:
/// `(Jv)_μ = J[(μ, ν)] v_ν`.
pub fn krein_involution(u: &FourVector) -> Result<Matrix4<f64>, Error> {
    check_unit_timelike(u)?;
    let lowered = u.lower();
    Ok(Matrix4::from_fn(|mu, nu| {
        let delta = if mu == nu { 1.0 } else { 0.0 };
        delta + 2.0 * lowered.0[mu] * u.0[nu]
    }))
}

pub(crate) fn check_unit_timelike(u: &FourVector) -> Result<(), Error> {
    if !u.0.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidKreinVector(u.0));
    }
    // relative to the size of the components so boosted vectors are accepted
    let scale = u.0.iter().map(|c| c * c).sum::<f64>().max(1.0);
    if (u.norm_sq() + 1.0).abs() > UNIT_TIMELIKE_TOL * scale {
        return Err(Error::InvalidKreinVector(u.0));
    }
    Ok(())
}

/// An orthonormal Lorentzian frame `e^(a)_μ`, `a = 0..3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub covectors: [FourCovector; 4],
}

impl Default for Frame {
    fn default() -> Self {
        Frame::standard()
    }
}

impl Frame {
    /// `e^(a)_μ = δ_μ^a`.
    pub fn standard() -> Self {
        Frame {
            covectors: std::array::from_fn(FourCovector::unit),
        }
    }

    /// Standard frame boosted with rapidity `beta` along the x axis.
    pub fn boosted_x(beta: f64) -> Self {
        let (c, s) = (beta.cosh(), beta.sinh());
        let mut frame = Frame::standard();
        frame.covectors[0] = FourCovector([c, s, 0.0, 0.0]);
        frame.covectors[1] = FourCovector([s, c, 0.0, 0.0]);
        frame
    }

    /// Largest deviation of `e^(a)·η⁻¹·e^(b)` from `η^ab`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, ea) in self.covectors.iter().enumerate() {
            for (b, eb) in self.covectors.iter().enumerate() {
                let target = if a == b { ETA[a] } else { 0.0 };
                let g = ea.dot(eb);
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// `Σ_ab η_ab e^(a)_μ e^(b)_ν C^μν`.
    pub fn contract_trace(&self, c: &Contraction) -> f64 {
        (0..4)
            .map(|a| ETA[a] * self.covectors[a].contract(c, &self.covectors[a]))
            .sum()
    }
}

/// Planck length and the gravitational coupling, tied by `κ² = 16π ℓ²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    planck_length: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants { planck_length: 1.0 }
    }
}

impl PhysicalConstants {
    pub fn from_planck_length(planck_length: f64) -> Result<Self, Error> {
        if !(planck_length.is_finite() && planck_length >= 0.0) {
            return Err(Error::InvalidConstant(planck_length));
        }
        Ok(PhysicalConstants { planck_length })
    }

    pub fn from_kappa_sq(kappa_sq: f64) -> Result<Self, Error> {
        if !(kappa_sq.is_finite() && kappa_sq >= 0.0) {
            return Err(Error::InvalidConstant(kappa_sq));
        }
        Self::from_planck_length((kappa_sq / (16.0 * PI)).sqrt())
    }

    /// `κ = 0`, the commutative limit.
    pub fn classical() -> Self {
        PhysicalConstants { planck_length: 0.0 }
    }

    pub fn planck_length(&self) -> f64 {
        self.planck_length
    }

    pub fn kappa_sq(&self) -> f64 {
        16.0 * PI * self.planck_length * self.planck_length
    }
}
