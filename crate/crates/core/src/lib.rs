//! Verification toolkit for the Riemann-invariant system `R_t + S R_x = 0`,
//! `S_t + R S_x = 0` and its N=1 supersymmetric extension.
//!
//! Symbolic work is delegated to the [`cas`] crate; this crate holds the
//! domain layers: superfields, Lie (super)algebras, symmetry checks,
//! reductions, the solution catalog, conservation laws and the numerical
//! general integral.

pub mod catalog;
pub mod conserve;
pub mod error;
pub mod hydro;
pub mod liealg;
pub mod par;
pub mod reduction;
pub mod report;
pub mod suites;
pub mod superfield;
pub mod symmetry;

pub use error::{Error, Result};
