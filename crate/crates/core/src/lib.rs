//! Exact-arithmetic calculus of proper polyhedral divisors, divisorial fans
//! and semilinear group actions on them, over explicit number fields.
//!
//! Everything is exact: scalars are arbitrary-precision rationals, geometry
//! is double-description based, linear programs are solved by an exact
//! simplex cross-checked by Fourier-Motzkin elimination.

pub mod arith;
pub mod base;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod galois;
pub mod lp;
pub mod par;
pub mod polyhedral;
pub mod ppdiv;
pub mod rat;
pub mod ser;
pub mod suites;

pub use error::{Error, Result};
