//! Analytic reduction of a pair integral `∬ χ_p(x) K(x - x′) χ_q(x′)`.
//!
//! The displacement `y = x - x′` is Gaussian with mean `d = p - q` and
//! per-axis variance `s² = 1/(2a_p) + 1/(2a_q)`. The spatial radius `r = |y⃗|`
//! has the noncentral density obtained from the closed-form angular average
//! `e^{-b(r²+R²)} sinh(2brR)/(2brR)`, `b = 1/(2s²)`, `R = |d⃗|`. Both
//! nonconstant kernels are then integrated over `t_y` in closed form, leaving a
//! smooth one-dimensional integral over `r` with breakpoints where the light
//! cone `|t_y| = r` crosses the bulk of the time distribution.

use std::f64::consts::{PI, SQRT_2};

use super::{Method, QuadratureConfig, QuadratureResult};
use crate::kernels::KernelKind;
use crate::quad;
use crate::special::{erfc, log_abs_shifted_normal};
use crate::testfn::GaussianBump;

/// Half-width of the radial window in units of `s`.
const RADIAL_WINDOW: f64 = 12.0;

#[derive(Clone, Copy, Debug)]
pub(crate) struct PairGeometry {
    /// time component of `p - q`
    pub d0: f64,
    /// spatial norm of `p - q`
    pub radius: f64,
    /// combined per-axis variance
    pub s2: f64,
}

impl PairGeometry {
    pub fn new(p: &GaussianBump, q: &GaussianBump) -> Self {
        let d = p.center.displacement(&q.center);
        PairGeometry {
            d0: d.0[0],
            radius: d.spatial_norm(),
            s2: p.variance() + q.variance(),
        }
    }

    /// Density of `r = |y⃗|`.
    pub fn radial_density(&self, r: f64) -> f64 {
        let b = 0.5 / self.s2;
        let big_r = self.radius;
        let pref = (b / PI).sqrt();
        let z = 2.0 * b * r * big_r;
        if z > 1.0 {
            pref * (r / big_r)
                * ((-b * (r - big_r).powi(2)).exp() - (-b * (r + big_r).powi(2)).exp())
        } else {
            let shape = if z == 0.0 { 1.0 } else { z.sinh() / z };
            pref * 4.0 * b * r * r * (-b * (r * r + big_r * big_r)).exp() * shape
        }
    }

    fn window(&self) -> (f64, f64) {
        let s = self.s2.sqrt();
        (
            (self.radius - RADIAL_WINDOW * s).max(0.0),
            self.radius + RADIAL_WINDOW * s,
        )
    }
}

/// `P(t_y > r) - P(t_y < -r)` for `t_y ~ N(d0, s²)`.
fn lightcone_given_r(g: &PairGeometry, r: f64) -> f64 {
    let k = SQRT_2 * g.s2.sqrt();
    0.5 * (erfc((r - g.d0) / k) - erfc((r + g.d0) / k))
}

/// `E ln|r² - t_y²|` over `t_y ~ N(d0, s²)`, minus `2 ln s`.
fn logabs_given_r(g: &PairGeometry, r: f64) -> f64 {
    let s = g.s2.sqrt();
    log_abs_shifted_normal((r - g.d0) / s) + log_abs_shifted_normal((r + g.d0) / s)
}

pub fn gaussian_pair_reduce(
    kernel: KernelKind,
    p: &GaussianBump,
    q: &GaussianBump,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let g = PairGeometry::new(p, q);
    let (lo, hi) = g.window();
    let breaks = [g.radius, g.d0.abs()];
    let tol = cfg.tolerance();
    let est = match kernel {
        KernelKind::Constant => return QuadratureResult::analytic(1.0),
        KernelKind::Lightcone => quad::integrate(
            |r| g.radial_density(r) * lightcone_given_r(&g, r),
            lo,
            hi,
            &breaks,
            &tol,
        ),
        KernelKind::LogAbs => {
            let mut e = quad::integrate(
                |r| g.radial_density(r) * logabs_given_r(&g, r),
                lo,
                hi,
                &breaks,
                &tol,
            );
            e.value += g.s2.ln();
            e
        }
    };
    QuadratureResult {
        value: est.value,
        error: est.error,
        method: Method::Reduced2D,
        evals: est.evals,
        converged: est.converged,
    }
}
