//! The symplectic form, the Krein involution and the quasi-free state.
//!
//! `Δ(f, g) = -(κ²/16π²) ln₋(P_ψ f, P_ψ g) + α κ² f̄·η·ḡ
//!            + (1/4ακ²) σ(f,ψ)·η·σ(g,ψ) + (i/2) σ(f, g)`
//!
//! and the two-point function of the state is `μ₂(f, g) = Δ(f, J g)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::integrate::{
    bilinear_form, gaussian_pair_reduce, scalar_form, Method, QuadratureConfig, QuadratureResult,
};
use crate::kernels::KernelKind;
use crate::minkowski::{
    inverse_metric, krein_involution, Contraction, FourCovector, FourVector, PhysicalConstants,
    SpacetimePoint,
};
use crate::testfn::{GaussianBump, ScalarProfile, VectorSmearing};

/// Everything that fixes the state and the Krein involution.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DMStateParams {
    pub state_alpha: f64,
    pub psi: GaussianBump,
    pub constants: PhysicalConstants,
    pub u: FourVector,
}

impl Default for DMStateParams {
    fn default() -> Self {
        DMStateParams {
            state_alpha: 1.0,
            psi: GaussianBump {
                center: SpacetimePoint::ORIGIN,
                width: 1.0,
            },
            constants: PhysicalConstants::default(),
            u: FourVector::REST,
        }
    }
}

impl DMStateParams {
    pub fn new(
        state_alpha: f64,
        psi: GaussianBump,
        constants: PhysicalConstants,
        u: FourVector,
    ) -> Result<Self, Error> {
        let p = DMStateParams {
            state_alpha,
            psi,
            constants,
            u,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.state_alpha.is_finite() && self.state_alpha > 0.0) {
            return Err(Error::InvalidStateAlpha(self.state_alpha));
        }
        GaussianBump::new(self.psi.center, self.psi.width)?;
        krein_involution(&self.u)?;
        Ok(())
    }

    pub fn kappa_sq(&self) -> f64 {
        self.constants.kappa_sq()
    }

    pub fn with_state_alpha(self, state_alpha: f64) -> Self {
        DMStateParams {
            state_alpha,
            ..self
        }
    }

    pub fn with_psi(self, psi: GaussianBump) -> Self {
        DMStateParams { psi, ..self }
    }

    /// Mixed-index matrix `δ_μ^ν + 2u_μ u^ν`.
    pub fn krein(&self) -> Matrix4<f64> {
        krein_involution(&self.u).expect("validated Krein vector")
    }
}

fn sigma_prefactor(constants: &PhysicalConstants) -> f64 {
    -constants.kappa_sq() / (8.0 * PI)
}

/// `σ(f, g) = -(κ²/8π) ∬ f_μ η^{μν} g_ν sgn(t - t′) Θ[-(x - x′)²]`.
pub fn sigma(
    f: &VectorSmearing,
    g: &VectorSmearing,
    constants: &PhysicalConstants,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    bilinear_form(KernelKind::Lightcone, f, g, &inverse_metric(), cfg)
        .scale(sigma_prefactor(constants))
}

/// `σ(f, J g)`, the pairing used by the state.
pub fn sigma_krein(
    f: &VectorSmearing,
    g: &VectorSmearing,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    sigma(f, &krein_j(g, &params.u), &params.constants, cfg)
}

/// `σ(f, ψ)_μ` with the free index kept on `f`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexedSigma {
    pub value: FourCovector,
    pub error: [f64; 4],
}

/// `s(f, ψ)_μ = Σ v_μ ∬ χ(x) sgn Θ ψ(x′)`, so that `σ(f, ψ)_μ = -(κ²/8π) s_μ`.
fn lightcone_moment(
    f: &VectorSmearing,
    psi: &GaussianBump,
    cfg: &QuadratureConfig,
) -> ([f64; 4], [f64; 4]) {
    let bumps = f.bumps();
    let pairs: Vec<QuadratureResult<f64>> = bumps
        .par_iter()
        .map(|b| crate::integrate::ordered_pair(KernelKind::Lightcone, b, psi, cfg))
        .collect();
    let mut value = [0.0; 4];
    let mut error = [0.0; 4];
    for t in f.terms() {
        let i = bumps.binary_search(&t.bump).expect("bump of f");
        let v = t.effective_covector();
        for mu in 0..4 {
            value[mu] += v.0[mu] * pairs[i].value;
            error[mu] += v.0[mu].abs() * pairs[i].error;
        }
    }
    (value, error)
}

pub fn sigma_indexed(
    f: &VectorSmearing,
    psi: &GaussianBump,
    constants: &PhysicalConstants,
    cfg: &QuadratureConfig,
) -> IndexedSigma {
    let c = sigma_prefactor(constants);
    let (value, error) = lightcone_moment(f, psi, cfg);
    IndexedSigma {
        value: FourCovector(value.map(|x| c * x)),
        error: error.map(|e| c.abs() * e),
    }
}

/// `(J f)_μ = (δ_μ^ν + 2u_μ u^ν) f_ν`.
pub fn krein_j(f: &VectorSmearing, u: &FourVector) -> VectorSmearing {
    let m = krein_involution(u).expect("unit timelike Krein vector");
    f.map_covectors(&m)
}

/// `ln₋(φ, χ) = ¼ min[Q(φ+χ), 0] - ¼ min[Q(φ-χ), 0]` with
/// `Q(φ) = ∬ φ ln|(x-x′)²| φ`.
pub fn log_minus_scalar(
    phi: &ScalarProfile,
    chi: &ScalarProfile,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let quad_form = |h: &ScalarProfile| scalar_form(KernelKind::LogAbs, h, h, cfg);
    let plus = quad_form(&phi.combine(chi, 1.0));
    let minus = quad_form(&phi.combine(chi, -1.0));
    let clip = |r: QuadratureResult<f64>| {
        if r.value < 0.0 {
            r
        } else {
            QuadratureResult { value: 0.0, ..r }
        }
    };
    clip(plus).scale(0.25).add_scaled(-0.25, &clip(minus))
}

/// `Σ_{μν} C^{μν} ln₋(f_μ, g_ν)`, clipping each scalar component pair.
pub fn log_minus_form(
    f: &VectorSmearing,
    g: &VectorSmearing,
    contraction: &Contraction,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let fc: [ScalarProfile; 4] = std::array::from_fn(|mu| f.component(mu));
    let gc: [ScalarProfile; 4] = std::array::from_fn(|mu| g.component(mu));
    let mut acc = QuadratureResult {
        method: Method::Reduced2D,
        ..QuadratureResult::zero()
    };
    for mu in 0..4 {
        for nu in 0..4 {
            let c = contraction[(mu, nu)];
            if c == 0.0 || fc[mu].is_zero() || gc[nu].is_zero() {
                continue;
            }
            acc = acc.add_scaled(c, &log_minus_scalar(&fc[mu], &gc[nu], cfg));
        }
    }
    acc
}

/// The four pieces of `Δ(f, g)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaTerms {
    /// `-(κ²/16π²) ln₋(P_ψ f, P_ψ g)`
    pub log_term: f64,
    /// `α κ² f̄·η·ḡ`
    pub mean_term: f64,
    /// `(1/4ακ²) σ(f,ψ)·η·σ(g,ψ)`
    pub sigma_psi_term: f64,
    /// `σ(f, g)`
    pub sigma: f64,
    pub error: f64,
    pub converged: bool,
}

impl DeltaTerms {
    pub fn total(&self) -> Complex64 {
        Complex64::new(
            self.log_term + self.mean_term + self.sigma_psi_term,
            0.5 * self.sigma,
        )
    }

    pub fn result(&self) -> QuadratureResult<Complex64> {
        QuadratureResult {
            value: self.total(),
            error: self.error,
            method: Method::Reduced2D,
            evals: 0,
            converged: self.converged,
        }
    }
}

pub fn dm_terms(
    f: &VectorSmearing,
    g: &VectorSmearing,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> DeltaTerms {
    let k2 = params.kappa_sq();
    let eta = inverse_metric();
    if k2 == 0.0 {
        return DeltaTerms {
            log_term: 0.0,
            mean_term: 0.0,
            sigma_psi_term: 0.0,
            sigma: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let psi = &params.psi;
    let log = log_minus_form(&f.project_psi(psi), &g.project_psi(psi), &eta, cfg)
        .scale(-k2 / (16.0 * PI * PI));
    let mean_term = params.state_alpha * k2 * f.mean().as_covector().dot(&g.mean().as_covector());
    // σ(f,ψ)·η·σ(g,ψ)/(4ακ²) = κ²/(256π²α) s(f)·η·s(g)
    let (sf, ef) = lightcone_moment(f, psi, cfg);
    let (sg, eg) = lightcone_moment(g, psi, cfg);
    let c = k2 / (256.0 * PI * PI * params.state_alpha);
    let sigma_psi_term = c * FourCovector(sf).dot(&FourCovector(sg));
    let sigma_psi_err: f64 = c
        * (0..4)
            .map(|mu| ef[mu] * sg[mu].abs() + sf[mu].abs() * eg[mu] + ef[mu] * eg[mu])
            .sum::<f64>();
    let s = sigma(f, g, &params.constants, cfg);
    DeltaTerms {
        log_term: log.value,
        mean_term,
        sigma_psi_term,
        sigma: s.value,
        error: log.error + sigma_psi_err + 0.5 * s.error,
        converged: log.converged && s.converged,
    }
}

/// `Δ_{α,ψ}(f, g)`.
pub fn dm_bilinear(
    f: &VectorSmearing,
    g: &VectorSmearing,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> QuadratureResult<Complex64> {
    dm_terms(f, g, params, cfg).result()
}

/// `μ₁(f) = ∫ x^μ f_μ`.
pub fn mu1(f: &VectorSmearing) -> f64 {
    f.moment1()
}

/// `μ₂(f, g) = Δ(f, J g)`.
pub fn mu2(
    f: &VectorSmearing,
    g: &VectorSmearing,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> QuadratureResult<Complex64> {
    dm_bilinear(f, &krein_j(g, &params.u), params, cfg)
}

/// `μ₂(f, f)` as a real number, rejecting negative or complex values that
/// exceed the quadrature error.
pub fn mu2_norm(
    f: &VectorSmearing,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<f64>, Error> {
    let r = mu2(f, f, params, cfg);
    let slack = 2.0 * r.error + 1e-12 * r.value.re.abs();
    if r.value.im.abs() > slack {
        return Err(Error::ImaginaryNorm {
            value: r.value.im,
            error: r.error,
        });
    }
    if r.value.re < -slack {
        return Err(Error::Positivity {
            value: r.value.re,
            error: r.error,
        });
    }
    Ok(QuadratureResult {
        value: r.value.re,
        error: r.error,
        method: r.method,
        evals: r.evals,
        converged: r.converged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GramKind {
    #[serde(rename = "N_MATRIX")]
    N,
    #[serde(rename = "M_MATRIX")]
    M,
}

/// Relative PSD threshold for Gram matrices.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub which: GramKind,
    pub matrix: DMatrix<Complex64>,
    pub min_eigenvalue: f64,
    pub spectral_norm: f64,
    pub is_psd: bool,
    /// largest `|A_kl - conj(A_lk)|`
    pub hermiticity_defect: f64,
}

impl GramReport {
    pub fn from_matrix(which: GramKind, matrix: DMatrix<Complex64>) -> Self {
        let n = matrix.nrows();
        let mut defect: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                defect = defect.max((matrix[(k, l)] - matrix[(l, k)].conj()).norm());
            }
        }
        let hermitian = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = hermitian.symmetric_eigenvalues();
        let min_eigenvalue = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let spectral_norm = eig.iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let is_psd = n == 0 || min_eigenvalue >= -PSD_TOL * spectral_norm;
        GramReport {
            which,
            matrix,
            min_eigenvalue: if n == 0 { 0.0 } else { min_eigenvalue },
            spectral_norm,
            is_psd,
            hermiticity_defect: defect,
        }
    }
}

/// Gram matrices `N_kl = μ₂(f_k, f_l)` and `M_kl = exp N_kl`.
pub fn gram_check(
    family: &[VectorSmearing],
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> (GramReport, GramReport) {
    let n = family.len();
    let entries: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|idx| mu2(&family[idx / n], &family[idx % n], params, cfg).value)
        .collect();
    let nm = DMatrix::from_fn(n, n, |k, l| entries[k * n + l]);
    let mm = nm.map(|z| z.exp());
    (
        GramReport::from_matrix(GramKind::N, nm),
        GramReport::from_matrix(GramKind::M, mm),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCondition {
    pub holds: bool,
    pub margin: f64,
    pub error: f64,
}

/// `Re μ₂(f,f) · Re μ₂(g,g) - ¼ σ(f, J g)²`.
pub fn pair_condition(
    f: &VectorSmearing,
    g: &VectorSmearing,
    params: &DMStateParams,
    cfg: &QuadratureConfig,
) -> PairCondition {
    let a = mu2(f, f, params, cfg);
    let b = mu2(g, g, params, cfg);
    let s = sigma_krein(f, g, params, cfg);
    let margin = a.value.re * b.value.re - 0.25 * s.value * s.value;
    let error = a.error * b.value.re.abs()
        + b.error * a.value.re.abs()
        + a.error * b.error
        + 0.5 * s.value.abs() * s.error;
    PairCondition {
        holds: margin >= -error,
        margin,
        error,
    }
}

/// Pair integral of the light-cone kernel, exposed for term isolation.
pub fn lightcone_pair(
    p: &GaussianBump,
    q: &GaussianBump,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    gaussian_pair_reduce(KernelKind::Lightcone, p, q, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::SmearingTerm;
    use proptest::prelude::*;

    fn bump(c: [f64; 4], a: f64) -> GaussianBump {
        GaussianBump::new(SpacetimePoint(c), a).unwrap()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn params() -> DMStateParams {
        DMStateParams::default()
    }

    #[test]
    fn rejects_invalid_params() {
        let p = params();
        assert!(DMStateParams::new(0.0, p.psi, p.constants, p.u).is_err());
        assert!(
            DMStateParams::new(1.0, p.psi, p.constants, FourVector([1.0, 1.0, 0.0, 0.0])).is_err()
        );
        assert!(DMStateParams::new(1.0, p.psi, p.constants, p.u).is_ok());
    }

    #[test]
    fn krein_j_examples() {
        let b = bump([0.0; 4], 1.0);
        let u = FourVector::REST;
        let f = VectorSmearing::single(FourCovector::unit(0), b);
        assert_eq!(
            krein_j(&f, &u),
            VectorSmearing::single(FourCovector([-1.0, 0.0, 0.0, 0.0]), b)
        );
        let g = VectorSmearing::single(FourCovector::unit(1), b);
        assert_eq!(krein_j(&g, &u), g);
    }

    #[test]
    fn sigma_examples() {
        let c = cfg();
        let k = PhysicalConstants::default();
        let e0 = FourCovector::unit(0);
        let p = VectorSmearing::single(e0, bump([1.0, 0.0, 0.0, 0.0], 1e4));
        let q = VectorSmearing::single(e0, bump([0.0; 4], 1e4));
        let s = sigma(&p, &q, &k, &c);
        let expected = k.kappa_sq() / (8.0 * PI);
        assert!((s.value - expected).abs() < 1e-3 * k.kappa_sq());
        let far = VectorSmearing::single(
            FourCovector([0.3, 1.0, 0.0, 0.0]),
            bump([0.0, 3.0, 0.0, 0.0], 1e4),
        );
        assert!(sigma(&far, &q, &k, &c).value.abs() < 1e-3 * k.kappa_sq());
        assert!(sigma(&p, &p, &k, &c).value.abs() < 1e-15);
    }

    #[test]
    fn sigma_indexed_examples() {
        let c = cfg();
        let k = PhysicalConstants::default();
        let psi = bump([0.0; 4], 1e3);
        let same = sigma_indexed(
            &VectorSmearing::single(FourCovector([1.0, 2.0, 0.0, 0.0]), psi),
            &psi,
            &k,
            &c,
        );
        assert!(same.value.0.iter().all(|x| x.abs() < 1e-15));
        let spacelike =
            VectorSmearing::single(FourCovector::unit(0), bump([0.0, 4.0, 0.0, 0.0], 1e3));
        assert!(sigma_indexed(&spacelike, &psi, &k, &c)
            .value
            .0
            .iter()
            .all(|x| x.abs() < 1e-10));
        let future = VectorSmearing::single(FourCovector::unit(0), bump([5.0, 0.0, 0.0, 0.0], 1e3));
        let s = sigma_indexed(&future, &psi, &k, &c);
        assert!((s.value.0[0] + k.kappa_sq() / (8.0 * PI)).abs() < 1e-9);
        assert_eq!(&s.value.0[1..], &[0.0; 3]);
    }

    #[test]
    fn log_minus_polarization_and_clipping() {
        let c = cfg();
        let narrow =
            ScalarProfile::difference(bump([1.0, 0.0, 0.0, 0.0], 1e3), bump([0.0; 4], 1e3));
        let q = scalar_form(KernelKind::LogAbs, &narrow, &narrow, &c);
        assert!(q.value < 0.0);
        let lm = log_minus_scalar(&narrow, &narrow, &c);
        assert!((lm.value - q.value).abs() < 1e-12 * q.value.abs());
        // a single wide bump has Q = ln(1/a) + 1 - γ > 0
        let wide = ScalarProfile::bump(bump([0.0; 4], 0.1));
        assert!(scalar_form(KernelKind::LogAbs, &wide, &wide, &c).value > 0.0);
        assert_eq!(log_minus_scalar(&wide, &wide, &c).value, 0.0);
    }

    #[test]
    fn mean_term_isolation() {
        // f has mean e⁰ and sits far from ψ and spacelike to it
        let psi = bump([0.0; 4], 50.0);
        let p = params().with_psi(psi);
        let f = VectorSmearing::single(FourCovector::unit(0), bump([0.0, 40.0, 0.0, 0.0], 50.0));
        let t = dm_terms(&f, &f, &p, &cfg());
        assert_eq!(t.mean_term, -p.state_alpha * p.kappa_sq());
        assert!(t.sigma_psi_term.abs() < 1e-20);
        assert!(t.sigma.abs() < 1e-15);
        let full = dm_bilinear(&f, &f, &p, &cfg()).value;
        assert!((full.re - (t.log_term + t.mean_term)).abs() < 1e-12 * full.re.abs());
    }

    #[test]
    fn spacelike_mean_zero_reduces_to_log_term() {
        let psi = bump([0.0; 4], 20.0);
        let p = params().with_psi(psi);
        let e1 = FourCovector::unit(1);
        let f = ScalarProfile::difference(
            bump([0.0, 10.0, 0.0, 0.0], 30.0),
            bump([0.0, 10.5, 0.0, 0.0], 30.0),
        )
        .with_covector(e1);
        let g = ScalarProfile::difference(
            bump([0.0, -10.0, 0.0, 0.0], 30.0),
            bump([0.0, -10.0, 0.5, 0.0], 30.0),
        )
        .with_covector(e1);
        let t = dm_terms(&f, &g, &p, &cfg());
        assert_eq!(t.mean_term, 0.0);
        assert!(t.sigma_psi_term.abs() < 1e-25);
        assert!(t.sigma.abs() < 1e-15);
        let log = log_minus_form(&f, &g, &inverse_metric(), &cfg()).value
            * (-p.kappa_sq() / (16.0 * PI * PI));
        assert!((t.log_term - log).abs() < 1e-12 * log.abs().max(1e-300));
    }

    #[test]
    fn mu2_basic_properties() {
        let p = params();
        let c = cfg();
        assert_eq!(
            mu2(&VectorSmearing::zero(), &VectorSmearing::zero(), &p, &c).value,
            Complex64::new(0.0, 0.0)
        );
        let f = VectorSmearing::from_terms([
            SmearingTerm::new(
                FourCovector([1.0, 0.2, 0.0, 0.0]),
                bump([0.5, 0.1, 0.0, 0.0], 20.0),
                1.0,
            ),
            SmearingTerm::new(
                FourCovector([0.0, 1.0, 0.5, 0.0]),
                bump([-0.3, 0.0, 0.4, 0.0], 30.0),
                1.0,
            ),
        ]);
        let m = mu2_norm(&f, &p, &c).unwrap();
        assert!(m.value > 0.0);
        let scaled = mu2_norm(&f.scale(3.0), &p, &c).unwrap();
        assert!((scaled.value - 9.0 * m.value).abs() < 1e-10 * scaled.value);
    }

    #[test]
    fn singleton_and_spacelike_gram() {
        let p = params().with_psi(bump([0.0; 4], 10.0));
        let c = cfg();
        let f = VectorSmearing::single(FourCovector::unit(2), bump([0.2, 0.0, 0.0, 0.0], 40.0));
        let (n, m) = gram_check(std::slice::from_ref(&f), &p, &c);
        assert!(n.is_psd && m.is_psd);
        assert!(m.matrix[(0, 0)].re > 0.0);
        let family: Vec<VectorSmearing> = (0..3)
            .map(|k| {
                let x = 6.0 * k as f64;
                ScalarProfile::difference(
                    bump([0.0, x, 0.0, 0.0], 30.0),
                    bump([0.0, x + 0.3, 0.0, 0.0], 30.0),
                )
                .with_covector(FourCovector::unit(1))
            })
            .collect();
        let (n, m) = gram_check(&family, &p, &c);
        assert!(n.is_psd, "{}", n.min_eigenvalue);
        assert!(m.is_psd, "{}", m.min_eigenvalue);
        assert!(n.matrix.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn pair_condition_examples() {
        let p = params();
        let c = cfg();
        let f = VectorSmearing::single(FourCovector::unit(0), bump([1.0, 0.0, 0.0, 0.0], 30.0));
        let self_pair = pair_condition(&f, &f, &p, &c);
        let m = mu2(&f, &f, &p, &c).value.re;
        assert!((self_pair.margin - m * m).abs() < 1e-12 * m * m);
        let g = VectorSmearing::single(FourCovector::unit(0), bump([0.0; 4], 30.0));
        assert!(pair_condition(&f, &g, &p, &c).holds);
    }

    fn arb_smearing() -> impl Strategy<Value = VectorSmearing> {
        prop::collection::vec(
            (
                prop::array::uniform4(-1.0f64..1.0),
                prop::array::uniform4(-1.0f64..1.0),
                10.0f64..60.0,
            ),
            1..3,
        )
        .prop_map(|v| {
            VectorSmearing::from_terms(
                v.into_iter()
                    .map(|(w, c, a)| SmearingTerm::new(FourCovector(w), bump(c, a), 1.0)),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn sigma_is_antisymmetric_and_vanishes_on_jf(f in arb_smearing(), g in arb_smearing()) {
            let k = PhysicalConstants::default();
            let c = cfg();
            let a = sigma(&f, &g, &k, &c);
            let b = sigma(&g, &f, &k, &c);
            prop_assert!((a.value + b.value).abs() <= a.error + b.error + 1e-12);
            let s = sigma_krein(&f, &f, &params(), &c);
            prop_assert!(s.value.abs() <= 2.0 * s.error + 1e-12);
        }

        #[test]
        fn delta_is_hermitian_and_mu2_positive(f in arb_smearing(), g in arb_smearing()) {
            let p = params();
            let c = cfg();
            let a = dm_bilinear(&f, &g, &p, &c);
            let b = dm_bilinear(&g, &f, &p, &c);
            prop_assert!((a.value - b.value.conj()).norm() <= a.error + b.error + 1e-10 * a.value.norm());
            let m = mu2(&f, &f, &p, &c);
            prop_assert!(m.value.re >= -2.0 * m.error);
            prop_assert!(m.value.im.abs() <= 2.0 * m.error + 1e-12);
        }
    }
}
