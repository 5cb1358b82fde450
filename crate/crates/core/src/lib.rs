//! Complex zeros of solutions of the Airy and Bessel equations.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airy_zeros;
pub mod bessel_zeros;
pub mod error;
pub mod exec;
pub mod lg_geometry;
pub mod solver;
pub mod specfun;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use types::*;
