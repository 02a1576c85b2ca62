//! Time-inhomogeneous skew Brownian motion.
//!
//! The process solves `dB = dW + β(t) dL⁰(B)` where `L⁰` is the symmetric
//! local time at zero and `β` takes values in `[-1, 1]`. This crate provides
//!
//! - [`beta`]: representations of the skewness coefficient and its monotone
//!   step envelopes,
//! - [`density`]: the explicit transition density with Chapman–Kolmogorov and
//!   normalization residuals,
//! - [`laws`]: closed-form endpoint laws and exact samplers,
//! - [`simulate`]: the excursion-flipping and transformed-SDE path
//!   constructions, coupled pairs, and path functionals,
//! - [`validate`]: goodness-of-fit checks producing [`validate::TestReport`]s,
//! - [`suite`]: the shipped validation suites.
//!
//! Monte Carlo loops run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise; results are identical either way
//! because every path owns its own random stream.

// `!(x > 0.0)` deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod density;
mod error;
pub mod grid;
pub mod laws;
pub mod parallel;
pub mod quadrature;
pub mod rng;
pub mod simulate;
pub mod suite;
pub mod validate;

pub use beta::BetaFunction;
pub use error::{Error, Result};
pub use laws::EndpointTriple;
pub use grid::{PathKind, SamplePath, TimeGrid};

pub use quadrature::{Estimate, QuadratureConfig};
pub use rng::RngStream;
pub use validate::TestReport;
