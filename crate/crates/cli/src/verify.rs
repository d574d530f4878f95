//! Verification suites behind `ncst verify`.
//!
//! `verify gram --families FILE` reads a list of families; a family is a list
//! of smearings and a smearing is a list of terms
//! `{"v": [4 reals], "center": [4 reals], "width": real, "weight": real}`
//! with `weight` defaulting to 1:
//!
//! ```json
//! [
//!   [ [ {"v": [1, 0, 0, 0], "center": [0, 0, 0, 0], "width": 20} ],
//!     [ {"v": [0, 1, 0, 0], "center": [1, 0, 0, 0], "width": 20, "weight": -0.5},
//!       {"v": [0, 1, 0, 0], "center": [0, 1, 0, 0], "width": 40} ] ]
//! ]
//! ```

use std::f64::consts::PI;
use std::fmt::Write;
use std::path::Path;

use ncst_core::config::EffectiveConfig;
use ncst_core::geometry::{distance, distance_alpha, LocalizedPoint};
use ncst_core::integrate::momentum::momentum_expansion;
use ncst_core::integrate::{reduce_expansion, PairExpansion};
use ncst_core::kernels::KernelKind;
use ncst_core::special::EULER_GAMMA;
use ncst_core::state::{gram_check, krein_j};
use ncst_core::testfn::{
    GaussianBump, ScalarProfile, SmearingTerm, SmearingTermRecord, VectorSmearing,
};
use ncst_core::weyl::{Pairing, SigmaTable, WeylElement};
use ncst_core::{FourCovector, SpacetimePoint};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::{Suite, VerifyArgs};
use crate::commands::resolve;
use crate::output::emit;
use crate::{CliError, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `|computed - expected| <= tolerance·|expected|`, or within `error`.
    Relative,
    /// `|computed - expected| <= tolerance`.
    Absolute,
    /// `computed >= expected - tolerance`.
    AtLeast,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    name: String,
    expected: f64,
    computed: f64,
    error: f64,
    tolerance: f64,
    rule: Rule,
    pass: bool,
}

impl Check {
    fn new(
        name: impl Into<String>,
        expected: f64,
        computed: f64,
        error: f64,
        tolerance: f64,
        rule: Rule,
    ) -> Self {
        let dev = (computed - expected).abs();
        let pass = match rule {
            Rule::Relative => dev <= tolerance * expected.abs() || dev <= error,
            Rule::Absolute => dev <= tolerance,
            Rule::AtLeast => computed >= expected - tolerance,
        };
        Check {
            name: name.into(),
            expected,
            computed,
            error,
            tolerance,
            rule,
            pass,
        }
    }
}

#[derive(Serialize)]
struct VerifyInput {
    suite: &'static str,
    count: usize,
}

fn bump(c: [f64; 4], a: f64) -> GaussianBump {
    GaussianBump::new(SpacetimePoint(c), a).expect("fixed suite widths are valid")
}

fn uniform4(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> [f64; 4] {
    std::array::from_fn(|_| rng.random_range(lo..hi))
}

/// One or two terms, widths log-uniform in `[10, 100]`, centers in the unit box.
fn random_smearing(rng: &mut ChaCha8Rng) -> VectorSmearing {
    let n = rng.random_range(1..=2);
    VectorSmearing::from_terms((0..n).map(|_| {
        let width = rng.random_range(10f64.ln()..100f64.ln()).exp();
        SmearingTerm::new(
            FourCovector(uniform4(rng, -1.0, 1.0)),
            bump(uniform4(rng, -1.0, 1.0), width),
            1.0,
        )
    }))
}

fn minvar(cfg: &EffectiveConfig) -> Vec<Check> {
    let q = &cfg.quadrature;
    let mut checks = Vec::new();
    for a in [1e2, 1e3, 1e4] {
        let (p0, q0) = (bump([0.0; 4], a), bump([1.0, 0.0, 0.0, 0.0], a));
        let self_term = reduce_expansion(
            KernelKind::LogAbs,
            &PairExpansion {
                pairs: vec![((p0, p0), 1.0)],
            },
            q,
        );
        checks.push(Check::new(
            format!("coincident pair E ln|y²| = -ln a + (1-γ), a={a:e}"),
            -a.ln() + (1.0 - EULER_GAMMA),
            self_term.value,
            self_term.error,
            1e-8,
            Rule::Relative,
        ));
        if a == 1e4 {
            let phi = ScalarProfile::difference(q0, p0);
            let form = reduce_expansion(KernelKind::LogAbs, &PairExpansion::scalar(&phi, &phi), q);
            for (label, constant) in [("4(1-γ)", 4.0), ("2(1-γ)", 2.0)] {
                checks.push(Check::new(
                    format!("Q(χp-χq) vs -2ln(a|s|) + {label}, a={a:e}"),
                    -2.0 * a.ln() + constant * (1.0 - EULER_GAMMA),
                    form.value,
                    form.error,
                    0.02,
                    Rule::Relative,
                ));
            }
        }
    }
    checks
}

fn fourier(cfg: &EffectiveConfig) -> Vec<Check> {
    let configs = [
        ("timelike", [1.0, 0.0, 0.0, 0.0], 30.0),
        ("timelike", [2.0, 0.5, 0.3, 0.0], 100.0),
        ("timelike", [0.7, 0.2, -0.1, 0.3], 12.0),
        ("spacelike", [0.0, 1.0, 0.0, 0.0], 30.0),
        ("spacelike", [0.3, 1.5, 0.4, 0.0], 100.0),
        ("spacelike", [0.1, 0.2, -0.6, 0.5], 12.0),
    ];
    configs
        .iter()
        .map(|(kind, c, a)| {
            let phi = ScalarProfile::difference(bump(*c, *a), bump([0.0; 4], *a));
            let e = PairExpansion::scalar(&phi, &phi);
            let m = momentum_expansion(&e, &cfg.quadrature);
            let log = reduce_expansion(KernelKind::LogAbs, &e, &cfg.quadrature);
            let scale = 1.0 / (16.0 * PI * PI);
            Check::new(
                format!("{kind} {c:?} a={a}: Re momentum form = -(1/16π²) log form"),
                -scale * log.value,
                m.value.re,
                m.error + scale * log.error,
                0.01,
                Rule::Relative,
            )
        })
        .collect()
}

fn load_families(path: &Path) -> Result<Vec<Vec<VectorSmearing>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let doc: Vec<Vec<Vec<SmearingTermRecord>>> = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    doc.iter()
        .map(|family| {
            family
                .iter()
                .map(|records| Ok(VectorSmearing::from_records(records)?))
                .collect()
        })
        .collect()
}

fn gram(cfg: &EffectiveConfig, count: usize, file: Option<&Path>) -> Result<Vec<Check>, CliError> {
    let params = cfg.params()?;
    let families = match file {
        Some(path) => load_families(path)?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.quadrature.seed);
            (0..count)
                .map(|_| {
                    let size = rng.random_range(1..=5);
                    (0..size).map(|_| random_smearing(&mut rng)).collect()
                })
                .collect()
        }
    };
    let mut checks = Vec::new();
    for (k, family) in families.iter().enumerate() {
        let size = family.len();
        let (n, m) = gram_check(family, &params, &cfg.quadrature);
        for (label, r) in [("N", n), ("M", m)] {
            checks.push(Check::new(
                format!("family {k} ({size}): min eigenvalue / norm of {label}"),
                0.0,
                r.min_eigenvalue / r.spectral_norm.max(f64::MIN_POSITIVE),
                0.0,
                1e-10,
                Rule::AtLeast,
            ));
        }
    }
    Ok(checks)
}

fn weyl(cfg: &EffectiveConfig, count: usize) -> Result<Vec<Check>, CliError> {
    let params = cfg.params()?;
    let table = SigmaTable::new(params.constants, Pairing::Plain, cfg.quadrature);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.quadrature.seed);
    let mut checks = Vec::new();
    for k in 0..count {
        let [f, g, h] = std::array::from_fn(|_| random_smearing(&mut rng));
        let [wf, wg, wh] = [&f, &g, &h].map(|x| WeylElement::generator(x.clone()));
        let left = wf.mul(&wg, &table).mul(&wh, &table);
        let right = wf.mul(&wg.mul(&wh, &table), &table);
        let key = &(&f + &g) + &h;
        let (l, r) = (left.coefficient(&key), right.coefficient(&key));
        let (dev, tol) = match (l, r) {
            (Some(l), Some(r)) => ((l.value - r.value).norm(), l.uncertainty + r.uncertainty),
            _ => (f64::INFINITY, 0.0),
        };
        checks.push(Check::new(
            format!("triple {k}: (W(f)W(g))W(h) = W(f)(W(g)W(h))"),
            0.0,
            dev,
            0.0,
            tol,
            Rule::Absolute,
        ));
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let a = wf.scale(c);
        checks.push(Check::new(
            format!("triple {k}: (a*)* = a and J² f = f"),
            1.0,
            f64::from(u8::from(
                a.star().star() == a && krein_j(&krein_j(&f, &params.u), &params.u) == f,
            )),
            0.0,
            0.0,
            Rule::Absolute,
        ));
    }
    Ok(checks)
}

fn alpha_limit(cfg: &EffectiveConfig) -> Result<Vec<Check>, CliError> {
    let params = cfg.params()?;
    let q = &cfg.quadrature;
    let (p, origin) = (
        LocalizedPoint::new(SpacetimePoint([1.0, 0.0, 0.0, 0.0]), 200.0)?,
        LocalizedPoint::new(SpacetimePoint([0.0; 4]), 200.0)?,
    );
    let limit = distance(&p, &origin, &params.constants, q);
    let devs: Vec<(f64, f64)> = [1e2, 1e4, 1e6]
        .iter()
        .map(|&alpha| {
            let d = distance_alpha(&p, &origin, &params.with_state_alpha(alpha), q);
            ((d.total - limit.total).abs(), d.error + limit.error)
        })
        .collect();
    let monotone = devs.windows(2).all(|w| w[1].0 <= w[0].0 + w[1].1);
    let far = params.with_state_alpha(1e6);
    let d1 = distance_alpha(&p, &origin, &far, q);
    let d2 = distance_alpha(
        &p,
        &origin,
        &far.with_psi(bump([2.0, -1.0, 0.5, 0.0], 0.3)),
        q,
    );
    Ok(vec![
        Check::new(
            "state_alpha=1e6 distance vs alpha limit",
            limit.total,
            d1.total,
            d1.error + limit.error,
            1e-3,
            Rule::Relative,
        ),
        Check::new(
            "deviation from the limit shrinks over state_alpha 1e2, 1e4, 1e6",
            1.0,
            f64::from(u8::from(monotone)),
            0.0,
            0.0,
            Rule::Absolute,
        ),
        Check::new(
            "state_alpha=1e6 distance under a second psi",
            d1.total,
            d2.total,
            d1.error + d2.error,
            1e-3,
            Rule::Relative,
        ),
    ])
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Minvar => "minvar",
        Suite::Fourier => "fourier",
        Suite::Gram => "gram",
        Suite::Weyl => "weyl",
        Suite::AlphaLimit => "alpha-limit",
    }
}

pub fn run(a: &VerifyArgs) -> Result<Status, CliError> {
    let cfg = resolve(&a.common)?;
    let checks = match a.suite {
        Suite::Minvar => minvar(&cfg),
        Suite::Fourier => fourier(&cfg),
        Suite::Gram => gram(&cfg, a.count, a.families.as_deref())?,
        Suite::Weyl => weyl(&cfg, a.count)?,
        Suite::AlphaLimit => alpha_limit(&cfg)?,
    };
    let input = VerifyInput {
        suite: suite_name(a.suite),
        count: a.count,
    };
    emit(a.common.format, "verify", &cfg, &input, &checks, |checks| {
        let mut s = String::new();
        for c in checks {
            let _ = writeln!(
                s,
                "{} {}: computed {:.10e} ± {:.1e}, expected {:.10e} ({:?} tolerance {:.1e})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.computed,
                c.error,
                c.expected,
                c.rule,
                c.tolerance
            );
        }
        s
    })?;
    Ok(if checks.iter().all(|c| c.pass) {
        Status::Ok
    } else {
        Status::VerificationFailed
    })
}
