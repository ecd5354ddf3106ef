//! Subgraph counts in W-random graphs.
//!
//! Exact homomorphism densities, conditional densities and H-regularity on
//! step graphons, the variance constants `τ²` and `σ²`, the spectrum of the
//! two-point conditional graphon, and a Monte Carlo harness that compares
//! sampled counts with their limiting laws.
//!
//! Numeric code is generic over [`Scalar`] (field arithmetic, including
//! exact rationals) or [`Real`] (floating point); the aliases below fix the
//! common choices.
//!
//! ```
//! use graphonlab::{limits, Graphon, KernelSpec, LabeledGraph, LimitLaw};
//!
//! let cherry = LabeledGraph::star(2);
//! let w: Graphon = KernelSpec::TwoBlock { p: 0.5 }.discretize(2)?;
//! assert_eq!(limits::sigma_squared(&cherry, &w)?, 1.0 / 64.0);
//! let law = limits::limit_law(&cherry, &w, 1e-10)?;
//! assert!(matches!(law, LimitLaw::Mixture { .. }));
//! # Ok::<(), graphonlab::Error>(())
//! ```

pub mod density;
pub mod error;
pub mod experiment;
pub mod graphon;
pub mod graphs;
pub mod limits;
pub mod sampler;
pub mod scalar;
pub mod selftest;
pub mod spectral;

pub use error::{Degeneracy, Error, Result};
pub use graphon::{KernelSpec, StepGraphon};
pub use graphs::{LabeledGraph, MultiGraph};
pub use limits::LimitLaw;
pub use scalar::{Real, Scalar};

/// Double-precision step graphon.
pub type Graphon = StepGraphon<f64>;
/// Single-precision step graphon.
pub type Graphon32 = StepGraphon<f32>;
/// Exact step graphon over arbitrary-precision rationals.
pub type RationalGraphon = StepGraphon<num_rational::BigRational>;

pub type Spectrum = spectral::Spectrum<f64>;
pub type ConditionalDensity = density::ConditionalDensity<f64>;
