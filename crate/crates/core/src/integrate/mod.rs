//! Bilinear forms `∬ f_μ(x) C^{μν} K(x - x′) g_ν(x′) d⁴x d⁴x′` over Gaussian
//! smearings.
//!
//! Every form is a weighted sum of scalar pair integrals, one per pair of
//! bumps. Three independent routes evaluate them: the analytically reduced
//! one-dimensional quadrature in [`reduce`], a direct eight-dimensional Monte
//! Carlo estimate in [`mc`], and the momentum-space representation of the
//! logarithmic kernel in [`momentum`].

pub mod mc;
pub mod momentum;
pub mod reduce;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernels::KernelKind;
use crate::minkowski::Contraction;
use crate::testfn::{GaussianBump, ScalarProfile, VectorSmearing};

pub use mc::mc_oracle;
pub use momentum::momentum_form;
pub use reduce::gaussian_pair_reduce;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
    /// Monte Carlo samples per pair of bumps.
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_evals: 200_000,
            mc_samples: 100_000,
            seed: 0x5eed,
        }
    }
}

impl QuadratureConfig {
    pub(crate) fn tolerance(&self) -> crate::quad::Tolerance {
        crate::quad::Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_evals: self.max_evals,
        }
    }

    pub fn validate(&self) -> Result<(), crate::Error> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(crate::Error::Config("tolerances must be positive".into()));
        }
        if self.max_evals == 0 {
            return Err(crate::Error::Config("max_evals must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "ANALYTIC")]
    Analytic,
    #[serde(rename = "REDUCED2D")]
    Reduced2D,
    #[serde(rename = "MC8D")]
    Mc8D,
    #[serde(rename = "MOMENTUM")]
    Momentum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error: f64,
    pub method: Method,
    pub evals: usize,
    pub converged: bool,
}

impl<T> QuadratureResult<T> {
    pub fn analytic(value: T) -> Self {
        QuadratureResult {
            value,
            error: 0.0,
            method: Method::Analytic,
            evals: 0,
            converged: true,
        }
    }
}

impl QuadratureResult<f64> {
    pub fn scale(self, c: f64) -> Self {
        QuadratureResult {
            value: c * self.value,
            error: c.abs() * self.error,
            ..self
        }
    }

    /// `self + c · other`, with errors added linearly.
    pub fn add_scaled(self, c: f64, other: &Self) -> Self {
        QuadratureResult {
            value: self.value + c * other.value,
            error: self.error + c.abs() * other.error,
            method: combine_method(self.method, other.method),
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }

    pub fn zero() -> Self {
        Self::analytic(0.0)
    }
}

fn combine_method(a: Method, b: Method) -> Method {
    match (a, b) {
        (Method::Analytic, m) | (m, Method::Analytic) => m,
        (m, _) => m,
    }
}

/// A bilinear form written as `Σ c_k · I_K(p_k, q_k)`.
#[derive(Clone, Debug, Default)]
pub struct PairExpansion {
    pub pairs: Vec<((GaussianBump, GaussianBump), f64)>,
}

impl PairExpansion {
    pub fn vector(f: &VectorSmearing, g: &VectorSmearing, contraction: &Contraction) -> Self {
        let mut acc: BTreeMap<(GaussianBump, GaussianBump), f64> = BTreeMap::new();
        for s in f.terms() {
            for t in g.terms() {
                let c = s
                    .effective_covector()
                    .contract(contraction, &t.effective_covector());
                if c != 0.0 {
                    *acc.entry((s.bump, t.bump)).or_insert(0.0) += c;
                }
            }
        }
        PairExpansion {
            pairs: acc.into_iter().collect(),
        }
    }

    pub fn scalar(phi: &ScalarProfile, chi: &ScalarProfile) -> Self {
        let mut acc: BTreeMap<(GaussianBump, GaussianBump), f64> = BTreeMap::new();
        for &(p, c) in &phi.terms {
            for &(q, d) in &chi.terms {
                *acc.entry((p, q)).or_insert(0.0) += c * d;
            }
        }
        PairExpansion {
            pairs: acc.into_iter().filter(|(_, c)| *c != 0.0).collect(),
        }
    }

    /// Sum of all coefficients; zero iff the constant-kernel form vanishes.
    pub fn coefficient_sum(&self) -> f64 {
        self.pairs.iter().map(|(_, c)| c).sum()
    }
}

type PairKey = (KernelKind, GaussianBump, GaussianBump, [u64; 3]);

const PAIR_CACHE_LIMIT: usize = 1 << 20;

fn pair_cache() -> &'static Mutex<HashMap<PairKey, QuadratureResult<f64>>> {
    static CACHE: OnceLock<Mutex<HashMap<PairKey, QuadratureResult<f64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized reduced pair integral. Entries are pure functions of the key, so
/// concurrent fills cannot change any value.
fn cached_pair(
    kernel: KernelKind,
    p: &GaussianBump,
    q: &GaussianBump,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let key = (
        kernel,
        *p,
        *q,
        [
            cfg.rel_tol.to_bits(),
            cfg.abs_tol.to_bits(),
            cfg.max_evals as u64,
        ],
    );
    if let Some(r) = pair_cache().lock().expect("pair cache").get(&key) {
        return *r;
    }
    let r = gaussian_pair_reduce(kernel, p, q, cfg);
    let mut cache = pair_cache().lock().expect("pair cache");
    if cache.len() >= PAIR_CACHE_LIMIT {
        cache.clear();
    }
    cache.insert(key, r);
    r
}

/// Pair integral with the bumps put in canonical order, so that swapping
/// the arguments reproduces the value exactly (negated for odd kernels).
pub(crate) fn ordered_pair(
    kernel: KernelKind,
    p: &GaussianBump,
    q: &GaussianBump,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    if kernel == KernelKind::Constant {
        return QuadratureResult::analytic(1.0);
    }
    if p <= q {
        cached_pair(kernel, p, q, cfg)
    } else {
        let r = cached_pair(kernel, q, p, cfg);
        if kernel.is_symmetric() {
            r
        } else {
            r.scale(-1.0)
        }
    }
}

/// Evaluate an expansion with the reduced quadrature route.
pub fn reduce_expansion(
    kernel: KernelKind,
    expansion: &PairExpansion,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let parts: Vec<QuadratureResult<f64>> = expansion
        .pairs
        .par_iter()
        .map(|((p, q), _)| ordered_pair(kernel, p, q, cfg))
        .collect();
    let init = if kernel == KernelKind::Constant {
        QuadratureResult::zero()
    } else {
        QuadratureResult {
            method: Method::Reduced2D,
            ..QuadratureResult::zero()
        }
    };
    expansion
        .pairs
        .iter()
        .zip(&parts)
        .fold(init, |acc, ((_, c), r)| acc.add_scaled(*c, r))
}

/// `∬ f_μ(x) C^{μν} K(x - x′) g_ν(x′)` via the reduced route.
pub fn bilinear_form(
    kernel: KernelKind,
    f: &VectorSmearing,
    g: &VectorSmearing,
    contraction: &Contraction,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    reduce_expansion(kernel, &PairExpansion::vector(f, g, contraction), cfg)
}

/// `∬ φ(x) K(x - x′) χ(x′)` for scalar profiles.
pub fn scalar_form(
    kernel: KernelKind,
    phi: &ScalarProfile,
    chi: &ScalarProfile,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    reduce_expansion(kernel, &PairExpansion::scalar(phi, chi), cfg)
}
