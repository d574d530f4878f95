//! Brute-force eight-dimensional Monte Carlo oracle.
//!
//! Each pair of bumps is a stratum: `x` is drawn from `χ_p`, `x′` from `χ_q`
//! and the kernel is averaged. Samples are grouped into fixed blocks, each with
//! its own ChaCha stream keyed on `(seed, pair, block)`, and block sums are
//! merged in index order, so the result does not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::{Method, PairExpansion, QuadratureConfig, QuadratureResult};
use crate::kernels::KernelKind;
use crate::minkowski::Contraction;
use crate::testfn::{GaussianBump, VectorSmearing};

pub const BLOCK: usize = 4096;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn merge(self, o: Moments) -> Moments {
        Moments {
            n: self.n + o.n,
            sum: self.sum + o.sum,
            sum_sq: self.sum_sq + o.sum_sq,
        }
    }

    fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Variance of the mean.
    fn mean_variance(&self) -> f64 {
        let n = self.n as f64;
        let m = self.mean();
        ((self.sum_sq / n - m * m).max(0.0)) / (n - 1.0).max(1.0)
    }

    /// Rule-of-three 95% bound for a bounded kernel: covers strata where a
    /// rare outcome was never drawn and the sample variance is zero.
    fn rare_event_bound(&self, kernel: KernelKind) -> f64 {
        let range = match kernel {
            KernelKind::Lightcone => 2.0,
            KernelKind::LogAbs | KernelKind::Constant => 0.0,
        };
        3.0 * range / self.n as f64
    }
}

fn sample_block(
    kernel: KernelKind,
    p: &GaussianBump,
    q: &GaussianBump,
    seed: u64,
    stream: u64,
    n: usize,
) -> Moments {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (sp, sq) = (p.variance().sqrt(), q.variance().sqrt());
    let mut m = Moments::default();
    for _ in 0..n {
        let mut y = [0.0; 4];
        for (mu, slot) in y.iter_mut().enumerate() {
            let zx: f64 = rng.sample(StandardNormal);
            let zy: f64 = rng.sample(StandardNormal);
            let x = p.center.0[mu] + sp * zx;
            let xp = q.center.0[mu] + sq * zy;
            *slot = x - xp;
        }
        let k = kernel.at_displacement(&y);
        m.n += 1;
        m.sum += k;
        m.sum_sq += k * k;
    }
    m
}

fn pair_moments(
    kernel: KernelKind,
    index: usize,
    p: &GaussianBump,
    q: &GaussianBump,
    cfg: &QuadratureConfig,
) -> Moments {
    let blocks = cfg.mc_samples.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let n = BLOCK.min(cfg.mc_samples - b * BLOCK);
            let stream = ((index as u64) << 32) | b as u64;
            sample_block(kernel, p, q, cfg.seed, stream, n)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Moments::default(), Moments::merge)
}

/// Evaluate an expansion by sampling; the error is a 95% confidence radius.
pub fn mc_expansion(
    kernel: KernelKind,
    expansion: &PairExpansion,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    let moments: Vec<Moments> = expansion
        .pairs
        .par_iter()
        .enumerate()
        .map(|(i, ((p, q), _))| pair_moments(kernel, i, p, q, cfg))
        .collect();
    let mut value = 0.0;
    let mut var = 0.0;
    let mut floor: f64 = 0.0;
    let mut evals = 0;
    for ((_, c), m) in expansion.pairs.iter().zip(&moments) {
        value += c * m.mean();
        var += c * c * m.mean_variance();
        floor += c.abs() * m.rare_event_bound(kernel);
        evals += m.n;
    }
    QuadratureResult {
        value,
        error: (Z95 * var.sqrt()).max(floor),
        method: Method::Mc8D,
        evals,
        converged: true,
    }
}

/// `∬ f_μ(x) C^{μν} K(x - x′) g_ν(x′)` by direct sampling.
pub fn mc_oracle(
    kernel: KernelKind,
    f: &VectorSmearing,
    g: &VectorSmearing,
    contraction: &Contraction,
    cfg: &QuadratureConfig,
) -> QuadratureResult<f64> {
    mc_expansion(kernel, &PairExpansion::vector(f, g, contraction), cfg)
}
