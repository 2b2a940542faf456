//! Weighted Orlicz-space numerics for Dunkl-Hausdorff operators.
//!
//! The crate represents N-functions and non-negative functions on `(0, ∞)`,
//! computes modulars and Luxemburg norms, applies the Dunkl-Hausdorff and
//! Hardy-type operators, evaluates weight conditions with their minimal
//! constants, and compares those against empirical inequality constants
//! measured over cones of non-increasing functions.

pub mod conditions;
pub mod error;
pub mod funcspace;
pub mod harness;
pub mod nfunctions;
pub mod operators;
pub mod orlicz;
pub mod par;
pub mod quad;
pub mod solve;

pub use error::{Error, Result};
