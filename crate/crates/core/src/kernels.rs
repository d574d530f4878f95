//! Translation-invariant kernels `K(x - x′)` on Minkowski space.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::minkowski::{minkowski_interval, SpacetimePoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum KernelKind {
    /// `sgn(t - t′) Θ[-(x - x′)²]`
    Lightcone,
    /// `ln|(x - x′)²|`
    LogAbs,
    /// `1`
    Constant,
}

impl KernelKind {
    pub fn is_symmetric(self) -> bool {
        !matches!(self, KernelKind::Lightcone)
    }

    /// Kernel at displacement `y = x - x′`. A null `y` gives `-∞` for
    /// [`KernelKind::LogAbs`]; that set has measure zero.
    pub fn at_displacement(self, y: &[f64; 4]) -> f64 {
        let s = -y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
        match self {
            KernelKind::Lightcone => lightcone_of(y[0], s) as f64,
            KernelKind::LogAbs => s.abs().ln(),
            KernelKind::Constant => 1.0,
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelKind::Lightcone => "LIGHTCONE",
            KernelKind::LogAbs => "LOGABS",
            KernelKind::Constant => "CONSTANT",
        })
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "lightcone" => Ok(KernelKind::Lightcone),
            "logabs" => Ok(KernelKind::LogAbs),
            "constant" => Ok(KernelKind::Constant),
            other => Err(Error::Config(format!("unknown kernel '{other}'"))),
        }
    }
}

fn lightcone_of(dt: f64, interval: f64) -> i8 {
    // sgn(0) = 0 and Θ(0) = 0 keep the kernel exactly antisymmetric
    if interval < 0.0 {
        if dt > 0.0 {
            1
        } else if dt < 0.0 {
            -1
        } else {
            0
        }
    } else {
        0
    }
}

pub fn lightcone(x: &SpacetimePoint, xp: &SpacetimePoint) -> i8 {
    lightcone_of(x.0[0] - xp.0[0], minkowski_interval(x, xp))
}

pub fn log_abs(x: &SpacetimePoint, xp: &SpacetimePoint) -> Result<f64, Error> {
    let s = minkowski_interval(x, xp);
    if s == 0.0 {
        return Err(Error::NullSeparation);
    }
    Ok(s.abs().ln())
}
