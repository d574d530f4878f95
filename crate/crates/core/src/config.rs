//! Run configuration documents.
//!
//! ```json
//! {
//!   "constants":  { "planck_length": 1.0, "u": [1, 0, 0, 0] },
//!   "state":      { "alpha": 1.0, "psi": { "center": [0, 0, 0, 0], "width": 1.0 } },
//!   "quadrature": { "rel_tol": 1e-10, "mc_samples": 100000, "seed": 24301 }
//! }
//! ```
//!
//! Every key is optional in a file; [`EffectiveConfig`] is the fully resolved
//! form, built by layering a file over the defaults.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::integrate::QuadratureConfig;
use crate::minkowski::{FourVector, PhysicalConstants, SpacetimePoint};
use crate::state::DMStateParams;
use crate::testfn::GaussianBump;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub constants: Option<ConstantsSection>,
    pub state: Option<StateSection>,
    pub quadrature: Option<QuadratureSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSection {
    pub planck_length: Option<f64>,
    pub kappa_sq: Option<f64>,
    pub u: Option<[f64; 4]>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSection {
    pub alpha: Option<f64>,
    pub psi: Option<PsiSection>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiSection {
    pub center: Option<[f64; 4]>,
    pub width: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_evals: Option<usize>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConstants {
    pub planck_length: f64,
    pub kappa_sq: f64,
    pub u: [f64; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectivePsi {
    pub center: [f64; 4],
    pub width: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveState {
    pub alpha: f64,
    pub psi: EffectivePsi,
}

/// A fully resolved configuration, echoed into every JSON report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub constants: EffectiveConstants,
    pub state: EffectiveState,
    pub quadrature: QuadratureConfig,
}

impl Default for EffectiveConfig {
    fn default() -> Self {
        let p = DMStateParams::default();
        EffectiveConfig {
            constants: EffectiveConstants {
                planck_length: p.constants.planck_length(),
                kappa_sq: p.constants.kappa_sq(),
                u: p.u.0,
            },
            state: EffectiveState {
                alpha: p.state_alpha,
                psi: EffectivePsi {
                    center: p.psi.center.0,
                    width: p.psi.width,
                },
            },
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl EffectiveConfig {
    /// Overwrite every field the file sets.
    pub fn overlay(&mut self, file: &ConfigFile) -> Result<(), Error> {
        if let Some(c) = &file.constants {
            match (c.planck_length, c.kappa_sq) {
                (Some(_), Some(_)) => {
                    return Err(Error::Config(
                        "set either planck_length or kappa_sq, not both".into(),
                    ))
                }
                (Some(l), None) => self.set_planck_length(l)?,
                (None, Some(k)) => self.set_kappa_sq(k)?,
                (None, None) => {}
            }
            if let Some(u) = c.u {
                self.constants.u = u;
            }
        }
        if let Some(s) = &file.state {
            if let Some(a) = s.alpha {
                self.state.alpha = a;
            }
            if let Some(psi) = &s.psi {
                if let Some(c) = psi.center {
                    self.state.psi.center = c;
                }
                if let Some(w) = psi.width {
                    self.state.psi.width = w;
                }
            }
        }
        if let Some(q) = &file.quadrature {
            let cfg = &mut self.quadrature;
            cfg.rel_tol = q.rel_tol.unwrap_or(cfg.rel_tol);
            cfg.abs_tol = q.abs_tol.unwrap_or(cfg.abs_tol);
            cfg.max_evals = q.max_evals.unwrap_or(cfg.max_evals);
            cfg.mc_samples = q.mc_samples.unwrap_or(cfg.mc_samples);
            cfg.seed = q.seed.unwrap_or(cfg.seed);
        }
        self.validate()
    }

    pub fn set_planck_length(&mut self, l: f64) -> Result<(), Error> {
        let c = PhysicalConstants::from_planck_length(l)?;
        self.constants.planck_length = c.planck_length();
        self.constants.kappa_sq = c.kappa_sq();
        Ok(())
    }

    pub fn set_kappa_sq(&mut self, k: f64) -> Result<(), Error> {
        let c = PhysicalConstants::from_kappa_sq(k)?;
        self.constants.planck_length = c.planck_length();
        self.constants.kappa_sq = c.kappa_sq();
        Ok(())
    }

    pub fn physical_constants(&self) -> PhysicalConstants {
        PhysicalConstants::from_planck_length(self.constants.planck_length)
            .expect("validated planck length")
    }

    pub fn params(&self) -> Result<DMStateParams, Error> {
        DMStateParams::new(
            self.state.alpha,
            GaussianBump::new(SpacetimePoint(self.state.psi.center), self.state.psi.width)?,
            self.physical_constants(),
            FourVector(self.constants.u),
        )
    }

    pub fn validate(&self) -> Result<(), Error> {
        PhysicalConstants::from_planck_length(self.constants.planck_length)?;
        self.params()?;
        self.quadrature.validate()
    }
}
