//! Special functions for Gaussian averages of logarithms.

use std::f64::consts::LN_2;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `E ln|m - Z|` for a standard normal `Z`.
///
/// Writes `½ E ln X²` with `X ~ N(m, 1)`; `X²` is a noncentral χ² with one
/// degree of freedom, i.e. a Poisson(m²/2) mixture of χ²_{1+2j}, and
/// `E ln χ²_ν = ln 2 + ψ(ν/2)`. Large `|m|` uses the asymptotic series.
pub fn log_abs_shifted_normal(m: f64) -> f64 {
    let m = m.abs();
    if m > ASYMPTOTIC_FROM {
        asymptotic(m)
    } else {
        poisson_series(m)
    }
}

const ASYMPTOTIC_FROM: f64 = 20.0;

fn asymptotic(m: f64) -> f64 {
    let m2 = m * m;
    let mut sum = m.ln();
    let mut dfact = 1.0;
    let mut pow = 1.0;
    for k in 1..=8 {
        dfact *= (2 * k - 1) as f64;
        pow *= m2;
        sum -= dfact / (2.0 * k as f64 * pow);
    }
    sum
}

fn poisson_series(m: f64) -> f64 {
    let lambda = 0.5 * m * m;
    let jmax = (lambda + 12.0 * lambda.sqrt() + 30.0) as usize;
    let mut weight = (-lambda).exp();
    // ψ(½) = -γ - 2 ln 2, ψ(j + ½) = ψ(j - ½) + 1/(j - ½)
    let mut digamma = -EULER_GAMMA - 2.0 * LN_2;
    let mut total = weight * digamma;
    for j in 1..=jmax {
        weight *= lambda / j as f64;
        digamma += 1.0 / (j as f64 - 0.5);
        total += weight * digamma;
    }
    0.5 * (LN_2 + total)
}

/// `∫_x^∞ e^{-t²} dt · 2/√π`.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, Tolerance};
    use std::f64::consts::PI;

    fn by_quadrature(m: f64) -> f64 {
        let f = |z: f64| (-0.5 * z * z).exp() / (2.0 * PI).sqrt() * (m - z).abs().ln();
        integrate(
            f,
            -40.0 + m.min(0.0),
            40.0 + m.max(0.0),
            &[m],
            &Tolerance::default(),
        )
        .value
    }

    #[test]
    fn origin_value() {
        // E ln|Z| = -(γ + ln 2)/2
        let expected = -0.5 * (EULER_GAMMA + LN_2);
        assert!((log_abs_shifted_normal(0.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn matches_direct_quadrature() {
        for m in [0.0, 0.3, 1.0, 2.5, 5.0, 10.0, 19.9, 20.1, 30.0, -4.0] {
            let g = log_abs_shifted_normal(m);
            let q = by_quadrature(m);
            assert!((g - q).abs() < 1e-10, "m = {m}: series {g}, quadrature {q}");
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let m = ASYMPTOTIC_FROM;
        assert!((asymptotic(m) - poisson_series(m)).abs() < 1e-13);
    }

    #[test]
    fn high_precision_reference_values() {
        // 30-digit adaptive quadrature of the defining integral
        let cases = [
            (5.0, 1.588_027_217_933_406_2),
            (10.0, 2.297_507_451_316_280_2),
            (20.000_000_001, 2.994_477_546_519_474_3),
        ];
        for (m, reference) in cases {
            assert!(
                (log_abs_shifted_normal(m) - reference).abs() < 1e-14,
                "m = {m}"
            );
        }
    }
}
