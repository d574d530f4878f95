//! Finite elements `Σ_k α_k W(f_k)` of the Weyl algebra.
//!
//! Products follow `W(f) W(g) = W(f + g) exp[-(i/2) σ(f, g)]`. Every
//! coefficient carries an absolute uncertainty inherited from the quadrature
//! error of the phases that built it.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::integrate::{QuadratureConfig, QuadratureResult};
use crate::minkowski::{FourVector, PhysicalConstants};
use crate::state::{dm_bilinear, mu1, mu2, sigma, DMStateParams};
use crate::testfn::VectorSmearing;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub value: Complex64,
    pub uncertainty: f64,
}

impl Coefficient {
    pub fn exact(value: Complex64) -> Self {
        Coefficient {
            value,
            uncertainty: 0.0,
        }
    }
}

/// Which symplectic pairing builds the product phases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Pairing {
    /// `σ(f, g)`
    Plain,
    /// `σ(f, J g)` with Krein vector `u`
    Krein(FourVector),
}

/// Memoized `σ` values keyed on canonical smearings.
pub struct SigmaTable {
    constants: PhysicalConstants,
    pairing: Pairing,
    cfg: QuadratureConfig,
    cache: Mutex<HashMap<(VectorSmearing, VectorSmearing), QuadratureResult<f64>>>,
}

impl SigmaTable {
    pub fn new(constants: PhysicalConstants, pairing: Pairing, cfg: QuadratureConfig) -> Self {
        SigmaTable {
            constants,
            pairing,
            cfg,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn sigma(&self, f: &VectorSmearing, g: &VectorSmearing) -> QuadratureResult<f64> {
        if f.is_zero() || g.is_zero() {
            return QuadratureResult::zero();
        }
        let key = (f.clone(), g.clone());
        if let Some(r) = self.cache.lock().expect("sigma table").get(&key) {
            return *r;
        }
        let r = match self.pairing {
            Pairing::Plain => sigma(f, g, &self.constants, &self.cfg),
            Pairing::Krein(u) => {
                sigma(f, &crate::state::krein_j(g, &u), &self.constants, &self.cfg)
            }
        };
        self.cache.lock().expect("sigma table").insert(key, r);
        r
    }

    pub fn len(&self) -> usize {
        self.cache.lock().expect("sigma table").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeylElement {
    terms: BTreeMap<VectorSmearing, Coefficient>,
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement::default()
    }

    /// `𝟙 = W(0)`.
    pub fn unit() -> Self {
        Self::generator(VectorSmearing::zero())
    }

    /// `W(f)`.
    pub fn generator(f: VectorSmearing) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(f, Coefficient::exact(Complex64::new(1.0, 0.0)));
        WeylElement { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (VectorSmearing, Complex64)>) -> Self {
        let mut e = WeylElement::zero();
        for (f, c) in terms {
            e.accumulate(f, Coefficient::exact(c));
        }
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VectorSmearing, &Coefficient)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, f: &VectorSmearing) -> Option<Coefficient> {
        self.terms.get(f).copied()
    }

    fn accumulate(&mut self, f: VectorSmearing, c: Coefficient) {
        let zero = Complex64::new(0.0, 0.0);
        let slot = self
            .terms
            .entry(f.clone())
            .or_insert(Coefficient::exact(zero));
        slot.value += c.value;
        slot.uncertainty += c.uncertainty;
        if slot.value == zero && slot.uncertainty == 0.0 {
            self.terms.remove(&f);
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        WeylElement {
            terms: self
                .terms
                .iter()
                .filter(|_| c != Complex64::new(0.0, 0.0))
                .map(|(f, k)| {
                    (
                        f.clone(),
                        Coefficient {
                            value: k.value * c,
                            uncertainty: k.uncertainty * c.norm(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &WeylElement) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.accumulate(f.clone(), *c);
        }
        out
    }

    /// `[W(f)]* = W(-f)`, coefficients conjugated.
    pub fn star(&self) -> Self {
        WeylElement {
            terms: self
                .terms
                .iter()
                .map(|(f, c)| {
                    (
                        -f,
                        Coefficient {
                            value: c.value.conj(),
                            uncertainty: c.uncertainty,
                        },
                    )
                })
                .collect(),
        }
    }

    /// Product through the Weyl relations.
    pub fn mul(&self, other: &WeylElement, table: &SigmaTable) -> Self {
        let mut out = WeylElement::zero();
        for (f, a) in &self.terms {
            for (g, b) in &other.terms {
                let s = table.sigma(f, g);
                let phase = Complex64::from_polar(1.0, -0.5 * s.value);
                let (na, nb) = (a.value.norm(), b.value.norm());
                let coef = Coefficient {
                    value: a.value * b.value * phase,
                    uncertainty: na * nb * 0.5 * s.error + nb * a.uncertainty + na * b.uncertainty,
                };
                out.accumulate(f + g, coef);
            }
        }
        out
    }

    /// Same smearings and every coefficient within the accumulated
    /// uncertainty plus `tol`.
    pub fn approx_eq(&self, other: &WeylElement, tol: f64) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().zip(&other.terms).all(|((f, a), (g, b))| {
                f == g && (a.value - b.value).norm() <= a.uncertainty + b.uncertainty + tol
            })
    }

    /// `ω(A) = Σ α_k exp[iμ₁(f_k) - ½ μ₂(f_k, f_k)]`.
    pub fn eval_omega(
        &self,
        params: &DMStateParams,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<Complex64>, Error> {
        self.evaluate(|f| {
            let m = mu2(f, f, params, cfg);
            let slack = 2.0 * m.error + 1e-12 * m.value.re.abs();
            if m.value.im.abs() > slack {
                return Err(Error::ImaginaryNorm {
                    value: m.value.im,
                    error: m.error,
                });
            }
            Ok((m.value.re, m.error, m.converged))
        })
    }

    /// `τ(A) = Σ α_k exp[iμ₁(f_k) - ½ Δ(f_k, f_k)]`; not a positive functional.
    pub fn eval_tau(
        &self,
        params: &DMStateParams,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<Complex64>, Error> {
        self.evaluate(|f| {
            // Im Δ(f,f) = ½σ(f,f) vanishes identically
            let d = dm_bilinear(f, f, params, cfg);
            Ok((d.value.re, d.error, d.converged))
        })
    }

    fn evaluate<F>(&self, two_point: F) -> Result<QuadratureResult<Complex64>, Error>
    where
        F: Fn(&VectorSmearing) -> Result<(f64, f64, bool), Error>,
    {
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        let mut converged = true;
        for (f, c) in &self.terms {
            let (m2, m2_err, ok) = if f.is_zero() {
                (0.0, 0.0, true)
            } else {
                two_point(f)?
            };
            let e = Complex64::from_polar((-0.5 * m2).exp(), mu1(f));
            value += c.value * e;
            error += e.norm() * (c.uncertainty + c.value.norm() * 0.5 * m2_err);
            converged &= ok;
        }
        Ok(QuadratureResult {
            value,
            error,
            method: crate::integrate::Method::Reduced2D,
            evals: 0,
            converged,
        })
    }
}
