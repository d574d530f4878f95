//! Momentum-space evaluation of the logarithmic two-point form.
//!
//! For a pair of bumps with displacement `(d0, d⃗)` and combined variance
//! `S² = s²` the `x, x′, t, t′` and angular integrals are Gaussian and leave
//!
//! `φ(k) = e^{-ik d0 - k²S²} (1 + ik d0 + k²S²) sinc(k|d⃗|)`,
//!
//! and the form is `(1/8π²) ∫_0^∞ dk/k Σ c_pq [φ_pq(k) - 1]`. The `-1` is free
//! when `Σ c_pq = 0` (mean-zero smearings) and removes the infrared `1/k`
//! divergence. The integrand decays like `e^{-k²S²}`, so truncating where that
//! factor falls below `1e-16` is rigorous. Its real part reproduces
//! `-(1/16π²)` times the position-space LOGABS form; its imaginary part is
//! `-(1/16π)` times the LIGHTCONE form.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{Method, PairExpansion, QuadratureConfig, QuadratureResult};
use crate::error::Error;
use crate::minkowski::Contraction;
use crate::quad;
use crate::testfn::VectorSmearing;

/// `ln 1e16`
const GAUSS_CUTOFF: f64 = 36.84;
const MAX_PANELS: usize = 4000;

struct Mode {
    coef: f64,
    d0: f64,
    radius: f64,
    s2: f64,
}

impl Mode {
    fn phi_minus_one(&self, k: f64) -> Complex64 {
        let kr = k * self.radius;
        let sinc = if kr.abs() < 1e-8 {
            1.0 - kr * kr / 6.0
        } else {
            kr.sin() / kr
        };
        let g = k * k * self.s2;
        let phase = Complex64::new(-g, -k * self.d0).exp();
        phase * Complex64::new(1.0 + g, k * self.d0) * sinc - 1.0
    }
}

/// Evaluate a mean-zero expansion in momentum space.
pub fn momentum_expansion(
    expansion: &PairExpansion,
    cfg: &QuadratureConfig,
) -> QuadratureResult<Complex64> {
    let modes: Vec<Mode> = expansion
        .pairs
        .iter()
        .map(|((p, q), c)| {
            let d = p.center.displacement(&q.center);
            Mode {
                coef: *c,
                d0: d.0[0],
                radius: d.spatial_norm(),
                s2: p.variance() + q.variance(),
            }
        })
        .collect();
    if modes.is_empty() {
        return QuadratureResult::analytic(Complex64::new(0.0, 0.0));
    }
    let s_min = modes
        .iter()
        .map(|m| m.s2)
        .fold(f64::INFINITY, f64::min)
        .sqrt();
    let k_max = GAUSS_CUTOFF.sqrt() / s_min;
    // one panel per half oscillation of the fastest mode
    let reach = modes
        .iter()
        .map(|m| m.d0.abs() + m.radius)
        .fold(0.0, f64::max);
    let panels = ((k_max * reach / PI).ceil() as usize).clamp(8, MAX_PANELS);
    let breaks: Vec<f64> = (1..panels)
        .map(|i| k_max * i as f64 / panels as f64)
        .collect();
    let integrand = |k: f64| {
        let sum = modes.iter().fold(Complex64::new(0.0, 0.0), |acc, m| {
            acc + m.phi_minus_one(k) * m.coef
        });
        sum / k
    };
    let tol = cfg.tolerance();
    let tol = quad::Tolerance {
        max_evals: tol.max_evals.max(4 * panels * quad::EVALS_PER_PANEL),
        ..tol
    };
    let est = quad::integrate(integrand, 0.0, k_max, &breaks, &tol);
    let norm = 1.0 / (8.0 * PI * PI);
    QuadratureResult {
        value: est.value * norm,
        error: est.error * norm,
        method: Method::Momentum,
        evals: est.evals,
        converged: est.converged,
    }
}

/// Momentum-space form of `(f, g)` under `contraction`; both smearings must
/// have zero mean.
pub fn momentum_form(
    f: &VectorSmearing,
    g: &VectorSmearing,
    contraction: &Contraction,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<Complex64>, Error> {
    let (fm, gm) = (f.mean(), g.mean());
    let scale = |s: &VectorSmearing| {
        s.terms()
            .iter()
            .map(|t| t.covector.0.iter().map(|c| c.abs()).sum::<f64>())
            .sum::<f64>()
    };
    let zero = |m: &[f64; 4], sc: f64| m.iter().all(|c| c.abs() <= 1e-12 * sc.max(1.0));
    if !zero(&fm.0, scale(f)) || !zero(&gm.0, scale(g)) {
        return Err(Error::NonZeroMean(fm.0, gm.0));
    }
    Ok(momentum_expansion(
        &PairExpansion::vector(f, g, contraction),
        cfg,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::scalar_form;
    use crate::kernels::KernelKind;
    use crate::minkowski::{inverse_metric, FourCovector, SpacetimePoint};
    use crate::testfn::{GaussianBump, ScalarProfile};

    fn bump(c: [f64; 4], a: f64) -> GaussianBump {
        GaussianBump::new(SpacetimePoint(c), a).unwrap()
    }

    #[test]
    fn rejects_nonzero_mean_and_handles_zero() {
        let f = VectorSmearing::single(FourCovector::unit(0), bump([0.0; 4], 1.0));
        assert!(matches!(
            momentum_form(&f, &f, &inverse_metric(), &Default::default()),
            Err(Error::NonZeroMean(..))
        ));
        let z = VectorSmearing::zero();
        let r = momentum_form(&z, &z, &inverse_metric(), &Default::default()).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn matches_position_space_forms() {
        let cfg = QuadratureConfig::default();
        for c in [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.5, 0.3, 0.2, 0.1],
            [2.0, 1.0, 0.0, 0.0],
        ] {
            let a = 30.0;
            let phi = ScalarProfile::difference(bump(c, a), bump([0.0; 4], a));
            let chi = ScalarProfile::difference(bump(c, a), bump([0.0, 0.2, 0.0, 0.0], 10.0));
            let m = momentum_expansion(&PairExpansion::scalar(&phi, &chi), &cfg);
            let log = scalar_form(KernelKind::LogAbs, &phi, &chi, &cfg);
            let cone = scalar_form(KernelKind::Lightcone, &phi, &chi, &cfg);
            let re = -log.value / (16.0 * PI * PI);
            let im = -cone.value / (16.0 * PI);
            assert!(
                (m.value.re - re).abs() < 1e-8 * (1.0 + re.abs()),
                "{c:?}: {} vs {re}",
                m.value.re
            );
            assert!(
                (m.value.im - im).abs() < 1e-8,
                "{c:?}: {} vs {im}",
                m.value.im
            );
        }
    }
}
