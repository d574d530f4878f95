//! Test functions: normalized Gaussian bumps and covector-weighted smearings.
//!
//! A bump of width `a` centered at `p` is
//! `(a/π)² exp[-a Σ_μ (x^μ - p^μ)²]` with a Euclidean sum, so it integrates to
//! one and has variance `1/(2a)` along every axis. A [`VectorSmearing`] is a
//! finite sum `f_μ(x) = Σ_k v^(k)_μ bump_k(x)`; every zeroth and first moment is
//! evaluated analytically.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::minkowski::{FourCovector, Frame, SpacetimePoint};

fn bits(x: f64) -> u64 {
    // -0.0 and 0.0 must compare and hash equal
    if x == 0.0 {
        0
    } else {
        x.to_bits()
    }
}

fn cmp_arrays(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x + 0.0).total_cmp(&(y + 0.0)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Normalized Gaussian `(a/π)² exp[-a Σ_μ (x^μ - p^μ)²]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GaussianBump {
    pub center: SpacetimePoint,
    pub width: f64,
}

impl GaussianBump {
    pub fn new(center: SpacetimePoint, width: f64) -> Result<Self, Error> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidWidth(width));
        }
        if !center.is_finite() {
            return Err(Error::NonFinite(center.0));
        }
        Ok(GaussianBump { center, width })
    }

    /// Per-axis variance `1/(2a)`.
    pub fn variance(&self) -> f64 {
        0.5 / self.width
    }

    pub fn peak(&self) -> f64 {
        let c = self.width / PI;
        c * c
    }

    pub fn eval(&self, x: &SpacetimePoint) -> f64 {
        let r2: f64 = (0..4).map(|i| (x.0[i] - self.center.0[i]).powi(2)).sum();
        self.peak() * (-self.width * r2).exp()
    }

    fn key(&self) -> [u64; 5] {
        let c = self.center.0;
        [
            bits(c[0]),
            bits(c[1]),
            bits(c[2]),
            bits(c[3]),
            bits(self.width),
        ]
    }

    fn as_array(&self) -> [f64; 5] {
        let c = self.center.0;
        [c[0], c[1], c[2], c[3], self.width]
    }
}

impl PartialEq for GaussianBump {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for GaussianBump {}

impl Hash for GaussianBump {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for GaussianBump {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussianBump {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_arrays(&self.as_array(), &other.as_array())
    }
}

/// One term `weight · v_μ · bump(x)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SmearingTerm {
    pub covector: FourCovector,
    pub bump: GaussianBump,
    pub weight: f64,
}

impl SmearingTerm {
    pub fn new(covector: FourCovector, bump: GaussianBump, weight: f64) -> Self {
        SmearingTerm {
            covector,
            bump,
            weight,
        }
    }

    /// `weight · v`.
    pub fn effective_covector(&self) -> FourCovector {
        self.covector.scale(self.weight)
    }
}

/// The per-axis mean `f̄_μ = ∫ f_μ d⁴x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeanVector(pub [f64; 4]);

impl MeanVector {
    pub fn as_covector(&self) -> FourCovector {
        FourCovector(self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

/// A finite sum of covector-weighted Gaussian bumps.
///
/// Kept in canonical form: each weight is folded into its covector, terms are
/// sorted, zero covectors are dropped and exact negations on the same bump
/// cancel pairwise. Nearly equal terms are never merged, so sums of smearings
/// are exactly associative and `f + (-f)` is exactly empty.
#[derive(Clone, Debug, Default)]
pub struct VectorSmearing {
    terms: Vec<SmearingTerm>,
}

impl VectorSmearing {
    pub fn zero() -> Self {
        VectorSmearing::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = SmearingTerm>) -> Self {
        Self::canonical(terms.into_iter().collect())
    }

    /// `v_μ · bump(x)`.
    pub fn single(covector: FourCovector, bump: GaussianBump) -> Self {
        Self::from_terms([SmearingTerm::new(covector, bump, 1.0)])
    }

    /// The four smearings `f^(a)_μ = e^(a)_μ χ(x)` of a frame.
    pub fn frame_smearings(chi: &GaussianBump, frame: &Frame) -> [VectorSmearing; 4] {
        std::array::from_fn(|a| Self::single(frame.covectors[a], *chi))
    }

    /// Canonical terms; every weight is 1.
    pub fn terms(&self) -> &[SmearingTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct bumps in sorted order.
    pub fn bumps(&self) -> Vec<GaussianBump> {
        let mut out: Vec<GaussianBump> = self.terms.iter().map(|t| t.bump).collect();
        out.dedup();
        out
    }

    pub fn evaluate(&self, x: &SpacetimePoint) -> FourCovector {
        self.terms.iter().fold(FourCovector::ZERO, |acc, t| {
            acc + t.effective_covector().scale(t.bump.eval(x))
        })
    }

    pub fn mean(&self) -> MeanVector {
        let mut m = [0.0; 4];
        for t in &self.terms {
            let v = t.effective_covector();
            for (mu, slot) in m.iter_mut().enumerate() {
                *slot += v.0[mu];
            }
        }
        MeanVector(m)
    }

    /// `μ₁(f) = ∫ x^μ f_μ d⁴x`; the first moment of each bump is its center.
    pub fn moment1(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.effective_covector().pair(&t.bump.center))
            .sum()
    }

    /// `P_ψ f = f - f̄ ψ`.
    pub fn project_psi(&self, psi: &GaussianBump) -> VectorSmearing {
        let mean = self.mean();
        if mean.is_zero() {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.push(SmearingTerm::new(-mean.as_covector(), *psi, 1.0));
        Self::canonical(terms)
    }

    /// Component `f_μ` as a scalar combination of bumps.
    pub fn component(&self, mu: usize) -> ScalarProfile {
        ScalarProfile::from_terms(
            self.terms
                .iter()
                .map(|t| (t.bump, t.effective_covector().0[mu])),
        )
    }

    /// Covectors transformed by the matrix `m`: `v'_μ = m[(μ, ν)] v_ν`.
    pub fn map_covectors(&self, m: &nalgebra::Matrix4<f64>) -> VectorSmearing {
        let terms = self.terms.iter().map(|t| {
            let v = t.covector.0;
            let w = std::array::from_fn(|mu| (0..4).map(|nu| m[(mu, nu)] * v[nu]).sum());
            SmearingTerm::new(FourCovector(w), t.bump, 1.0)
        });
        Self::from_terms(terms)
    }

    pub fn scale(&self, c: f64) -> VectorSmearing {
        Self::from_terms(self.terms.iter().map(|t| SmearingTerm {
            covector: t.covector.scale(c),
            ..*t
        }))
    }

    fn canonical(raw: Vec<SmearingTerm>) -> Self {
        // net multiplicity per (bump, covector up to sign)
        let mut counts: BTreeMap<(GaussianBump, CovectorKey), i64> = BTreeMap::new();
        for t in raw {
            let v = t.effective_covector();
            if v.is_zero() {
                continue;
            }
            let (key, sign) = CovectorKey::oriented(v);
            *counts.entry((t.bump, key)).or_insert(0) += sign;
        }
        let mut terms = Vec::new();
        for ((bump, key), n) in counts {
            let v = if n > 0 { key.0 } else { -key.0 };
            for _ in 0..n.unsigned_abs() {
                terms.push(SmearingTerm::new(v, bump, 1.0));
            }
        }
        terms.sort_by(|a, b| {
            a.bump
                .cmp(&b.bump)
                .then_with(|| cmp_arrays(&a.covector.0, &b.covector.0))
        });
        VectorSmearing { terms }
    }

    fn term_keys(&self) -> impl Iterator<Item = ([u64; 5], [u64; 4])> + '_ {
        self.terms
            .iter()
            .map(|t| (t.bump.key(), t.covector.0.map(bits)))
    }
}

/// A covector normalized so its first nonzero component is positive.
#[derive(Clone, Copy, Debug)]
struct CovectorKey(FourCovector);

impl CovectorKey {
    fn oriented(v: FourCovector) -> (CovectorKey, i64) {
        let first = v.0.iter().copied().find(|&c| c != 0.0).unwrap_or(0.0);
        if first < 0.0 {
            (CovectorKey(-v), -1)
        } else {
            (CovectorKey(v), 1)
        }
    }
}

impl PartialEq for CovectorKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for CovectorKey {}

impl PartialOrd for CovectorKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CovectorKey {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_arrays(&self.0 .0, &other.0 .0)
    }
}

impl PartialEq for VectorSmearing {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len() && self.term_keys().eq(other.term_keys())
    }
}

impl Eq for VectorSmearing {}

impl Hash for VectorSmearing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for k in self.term_keys() {
            k.hash(state);
        }
    }
}

impl PartialOrd for VectorSmearing {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VectorSmearing {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a
                .bump
                .cmp(&b.bump)
                .then_with(|| cmp_arrays(&a.covector.0, &b.covector.0));
            if o.is_ne() {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl Add for &VectorSmearing {
    type Output = VectorSmearing;
    fn add(self, rhs: &VectorSmearing) -> VectorSmearing {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        VectorSmearing::canonical(terms)
    }
}

impl Add for VectorSmearing {
    type Output = VectorSmearing;
    fn add(self, rhs: VectorSmearing) -> VectorSmearing {
        &self + &rhs
    }
}

impl Neg for &VectorSmearing {
    type Output = VectorSmearing;
    fn neg(self) -> VectorSmearing {
        VectorSmearing::canonical(
            self.terms
                .iter()
                .map(|t| SmearingTerm::new(-t.covector, t.bump, 1.0))
                .collect(),
        )
    }
}

impl Neg for VectorSmearing {
    type Output = VectorSmearing;
    fn neg(self) -> VectorSmearing {
        -&self
    }
}

impl Sub for &VectorSmearing {
    type Output = VectorSmearing;
    fn sub(self, rhs: &VectorSmearing) -> VectorSmearing {
        self + &(-rhs)
    }
}

impl Sub for VectorSmearing {
    type Output = VectorSmearing;
    fn sub(self, rhs: VectorSmearing) -> VectorSmearing {
        &self - &rhs
    }
}

impl Mul<f64> for &VectorSmearing {
    type Output = VectorSmearing;
    fn mul(self, rhs: f64) -> VectorSmearing {
        self.scale(rhs)
    }
}

/// A real scalar combination `Σ_k c_k bump_k(x)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScalarProfile {
    pub terms: Vec<(GaussianBump, f64)>,
}

impl ScalarProfile {
    pub fn from_terms(terms: impl IntoIterator<Item = (GaussianBump, f64)>) -> Self {
        ScalarProfile {
            terms: terms.into_iter().filter(|(_, c)| *c != 0.0).collect(),
        }
    }

    pub fn bump(b: GaussianBump) -> Self {
        Self::from_terms([(b, 1.0)])
    }

    /// `χ_p - χ_q`.
    pub fn difference(p: GaussianBump, q: GaussianBump) -> Self {
        Self::from_terms([(p, 1.0), (q, -1.0)])
    }

    pub fn mean(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn eval(&self, x: &SpacetimePoint) -> f64 {
        self.terms.iter().map(|(b, c)| c * b.eval(x)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `self + sign · other`, keeping terms separate.
    pub fn combine(&self, other: &ScalarProfile, sign: f64) -> ScalarProfile {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|&(b, c)| (b, sign * c)));
        ScalarProfile::from_terms(terms)
    }

    /// The same profile carried by a covector: `v_μ · φ(x)`.
    pub fn with_covector(&self, v: FourCovector) -> VectorSmearing {
        VectorSmearing::from_terms(self.terms.iter().map(|&(b, c)| SmearingTerm::new(v, b, c)))
    }
}

/// One entry of a smearing family document:
/// `{"v": [4 reals], "center": [4 reals], "width": real, "weight": real}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SmearingTermRecord {
    pub v: [f64; 4],
    pub center: [f64; 4],
    pub width: f64,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<SmearingTermRecord> for SmearingTerm {
    type Error = Error;

    fn try_from(record: SmearingTermRecord) -> Result<Self, Error> {
        let covector = FourCovector(record.v);
        if !covector.is_finite() || !record.weight.is_finite() {
            return Err(Error::NonFinite(record.v));
        }
        let bump = GaussianBump::new(SpacetimePoint(record.center), record.width)?;
        Ok(SmearingTerm::new(covector, bump, record.weight))
    }
}

impl From<&SmearingTerm> for SmearingTermRecord {
    fn from(t: &SmearingTerm) -> Self {
        SmearingTermRecord {
            v: t.covector.0,
            center: t.bump.center.0,
            width: t.bump.width,
            weight: t.weight,
        }
    }
}

impl VectorSmearing {
    pub fn from_records(records: &[SmearingTermRecord]) -> Result<Self, Error> {
        let terms = records
            .iter()
            .map(|s| SmearingTerm::try_from(*s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_terms(terms))
    }

    pub fn to_records(&self) -> Vec<SmearingTermRecord> {
        self.terms.iter().map(SmearingTermRecord::from).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bump(t: f64, x: f64, a: f64) -> GaussianBump {
        GaussianBump::new(SpacetimePoint::new(t, x, 0.0, 0.0), a).unwrap()
    }

    #[test]
    fn rejects_bad_width() {
        assert!(GaussianBump::new(SpacetimePoint::ORIGIN, 0.0).is_err());
        assert!(GaussianBump::new(SpacetimePoint::ORIGIN, -1.0).is_err());
        assert!(GaussianBump::new(SpacetimePoint::ORIGIN, f64::INFINITY).is_err());
    }

    #[test]
    fn evaluate_peak_empty_and_cancellation() {
        let b = bump(0.3, -1.0, 2.0);
        let v = FourCovector([1.0, 2.0, 0.0, -1.0]);
        let f = VectorSmearing::single(v, b);
        let peak = (2.0 / PI).powi(2);
        let val = f.evaluate(&b.center);
        for mu in 0..4 {
            assert!((val.0[mu] - v.0[mu] * peak).abs() < 1e-15);
        }
        assert_eq!(
            VectorSmearing::zero().evaluate(&b.center),
            FourCovector::ZERO
        );
        let g = VectorSmearing::from_terms([
            SmearingTerm::new(v, b, 1.0),
            SmearingTerm::new(v, b, -1.0),
        ]);
        assert!(g.is_zero());
        assert_eq!(g.evaluate(&b.center), FourCovector::ZERO);
    }

    #[test]
    fn means_are_analytic() {
        let p = bump(1.0, 0.0, 3.0);
        let q = bump(0.0, 0.0, 7.0);
        let e0 = FourCovector::unit(0);
        assert_eq!(VectorSmearing::single(e0, p).mean().0, [1.0, 0.0, 0.0, 0.0]);
        let diff = &VectorSmearing::single(e0, p) - &VectorSmearing::single(e0, q);
        assert_eq!(diff.mean().0, [0.0; 4]);
        let f = VectorSmearing::from_terms([SmearingTerm::new(FourCovector::unit(1), p, 2.5)]);
        assert_eq!(f.mean().0, [0.0, 2.5, 0.0, 0.0]);
    }

    #[test]
    fn projector_range_kernel_and_substitution() {
        let p = bump(1.0, 0.5, 3.0);
        let psi = bump(0.0, 0.0, 1.0);
        let v = FourCovector([1.0, -2.0, 0.5, 0.0]);
        let zero_mean = ScalarProfile::difference(p, psi).with_covector(v);
        assert_eq!(zero_mean.project_psi(&psi), zero_mean);
        assert!(VectorSmearing::single(v, psi).project_psi(&psi).is_zero());
        let projected = VectorSmearing::single(v, p).project_psi(&psi);
        assert_eq!(
            projected,
            ScalarProfile::difference(p, psi).with_covector(v)
        );
    }

    #[test]
    fn frame_smearings_carry_frame_covectors() {
        let chi = bump(0.0, 0.0, 5.0);
        let fs = VectorSmearing::frame_smearings(&chi, &Frame::standard());
        for (a, f) in fs.iter().enumerate() {
            assert_eq!(f.mean().as_covector(), FourCovector::unit(a));
            let peak = f.evaluate(&SpacetimePoint::ORIGIN);
            assert_eq!(peak, FourCovector::unit(a).scale(chi.peak()));
        }
    }

    #[test]
    fn first_moments() {
        let c = bump(1.0, 2.0, 4.0);
        assert_eq!(
            VectorSmearing::single(FourCovector::unit(0), c).moment1(),
            1.0
        );
        assert_eq!(
            VectorSmearing::single(FourCovector::unit(1), c).moment1(),
            2.0
        );
        let p = GaussianBump::new(SpacetimePoint::new(3.0, 1.0, -2.0, 0.5), 9.0).unwrap();
        let q = GaussianBump::new(SpacetimePoint::new(-1.0, 0.0, 4.0, 2.0), 2.0).unwrap();
        for a in 0..4 {
            let e = FourCovector::unit(a);
            let h = ScalarProfile::difference(p, q).with_covector(e);
            assert_eq!(h.moment1(), p.center.0[a] - q.center.0[a]);
        }
    }

    #[test]
    fn sums_cancel_exactly() {
        let f = VectorSmearing::from_terms([
            SmearingTerm::new(FourCovector([0.1, 0.2, 0.3, 0.4]), bump(0.0, 1.0, 2.0), 1.7),
            SmearingTerm::new(
                FourCovector([-1.0, 0.0, 3.0, 0.0]),
                bump(2.0, 1.0, 5.0),
                -0.3,
            ),
        ]);
        assert!((&f + &(-&f)).is_zero());
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn record_document_round_trip() {
        let json = r#"[{"v":[1,0,0,0],"center":[0,0,0,0],"width":2.0,"weight":0.5},
                       {"v":[0,1,0,0],"center":[1,0,0,0],"width":3.0}]"#;
        let records: Vec<SmearingTermRecord> = serde_json::from_str(json).unwrap();
        let f = VectorSmearing::from_records(&records).unwrap();
        assert_eq!(f.mean().0, [0.5, 1.0, 0.0, 0.0]);
        assert_eq!(VectorSmearing::from_records(&f.to_records()).unwrap(), f);
        let bad = r#"[{"v":[1,0,0,0],"center":[0,0,0,0],"width":-2.0}]"#;
        let records: Vec<SmearingTermRecord> = serde_json::from_str(bad).unwrap();
        assert!(VectorSmearing::from_records(&records).is_err());
    }

    fn arb_smearing() -> impl Strategy<Value = VectorSmearing> {
        prop::collection::vec(
            (
                prop::array::uniform4(-2.0f64..2.0),
                prop::array::uniform4(-3.0f64..3.0),
                0.5f64..20.0,
                -2.0f64..2.0,
            ),
            0..4,
        )
        .prop_map(|raw| {
            VectorSmearing::from_terms(raw.into_iter().map(|(v, c, a, w)| {
                SmearingTerm::new(
                    FourCovector(v),
                    GaussianBump::new(SpacetimePoint(c), a).unwrap(),
                    w,
                )
            }))
        })
    }

    proptest! {
        #[test]
        fn projection_has_zero_mean_and_is_idempotent(f in arb_smearing(),
                                                      c in prop::array::uniform4(-3.0f64..3.0),
                                                      a in 0.5f64..10.0) {
            let psi = GaussianBump::new(SpacetimePoint(c), a).unwrap();
            let pf = f.project_psi(&psi);
            let scale = 1.0 + f.terms().iter().map(|t| t.covector.0.iter().map(|x| x.abs()).sum::<f64>()).sum::<f64>();
            for m in pf.mean().0 {
                prop_assert!(m.abs() <= 8.0 * f64::EPSILON * scale);
            }
            let ppf = pf.project_psi(&psi);
            let x = SpacetimePoint(c);
            let (v1, v2) = (pf.evaluate(&x), ppf.evaluate(&x));
            for mu in 0..4 {
                prop_assert!((v1.0[mu] - v2.0[mu]).abs() <= 1e-12 * scale * psi.peak());
            }
        }

        #[test]
        fn moment1_is_linear(f in arb_smearing(), g in arb_smearing(), c in -3.0f64..3.0) {
            let lhs = (&f.scale(c) + &g).moment1();
            let rhs = c * f.moment1() + g.moment1();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }

        #[test]
        fn addition_is_associative(f in arb_smearing(), g in arb_smearing(), h in arb_smearing()) {
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        }
    }
}
