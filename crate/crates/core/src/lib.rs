//! High-precision harmonic inversion.
//!
//! Recovers the frequencies and amplitudes of a short, uniformly sampled sum
//! of complex exponentials by solving the generalized eigenvalue problem
//! `U x = u S x` built from the samples, at arbitrary decimal precision.

pub mod error;
pub mod experiments;
pub mod inversion;
pub mod lambda;
pub mod linalg;
pub mod par;
pub mod rng;
pub mod signal;

pub use error::{Error, Result, Stage};
pub use linalg::{Complex, Matrix, PrecisionContext, Real};
