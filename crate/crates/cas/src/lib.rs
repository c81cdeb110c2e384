//! Canonical symbolic expressions over jet coordinates with Grassmann-odd
//! constants and fields.
//!
//! The crate has three layers:
//! * [`grassmann`]: the exterior algebra over the registered odd generators,
//! * [`expr`]: canonical sums of monomials in even atoms, odd generators and odd jets,
//! * [`diff`], [`subst`], [`zero`]: total derivatives, substitution and the two zero-testing tiers.

pub mod diff;
pub mod error;
pub mod eval;
pub mod expr;
pub mod grassmann;
pub mod parse;
mod print;
pub mod rational;
pub mod registry;
pub mod subst;
pub mod zero;

pub use diff::JetContext;
pub use error::CasError;
pub use expr::{Atom, Expr, Func, Jet, Odd};
pub use rational::Q;
pub use zero::{NumericOptions, ZeroVerdict};

pub type Result<T> = std::result::Result<T, CasError>;
