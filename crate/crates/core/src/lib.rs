//! Numerics for a noncommutative Minkowski spacetime built on a Weyl algebra.
//!
//! Coordinates are smeared against covector-valued Gaussian test functions.
//! The crate provides the light-cone symplectic form, a quasi-free state with
//! a clipped logarithmic two-point function, the Lorentzian distance and fuzzy
//! causal functionals derived from it, and the quadrature machinery (a reduced
//! one-dimensional route, a Monte Carlo oracle and a momentum-space route) that
//! evaluates every bilinear form.

pub mod config;
pub mod error;
pub mod geometry;
pub mod integrate;
pub mod kernels;
pub mod minkowski;
pub mod quad;
pub mod special;
pub mod state;
pub mod testfn;
pub mod weyl;

pub use error::Error;
pub use geometry::{
    causal, causal_via_weyl, classical_term, corrected_synge, distance, distance_alpha,
    DistanceBreakdown, LocalizedPoint,
};
pub use integrate::{
    bilinear_form, gaussian_pair_reduce, mc_oracle, momentum_form, Method, QuadratureConfig,
    QuadratureResult,
};
pub use kernels::KernelKind;
pub use minkowski::{
    minkowski_interval, synge, FourCovector, FourVector, Frame, PhysicalConstants, SpacetimePoint,
};
pub use state::{DMStateParams, GramReport};
pub use testfn::{GaussianBump, MeanVector, ScalarProfile, SmearingTerm, VectorSmearing};
pub use weyl::WeylElement;
