//! Numerical laboratory for drift-diffusion equations with critical or
//! supercritical fractional dissipation on the periodic torus.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
mod fft;
pub mod field;
pub mod fit;
pub mod generate;
pub mod grid;
pub mod io;
pub mod singular;
pub mod spaces;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Norms, ScalarField, VelocityField};
pub use grid::{GridSpec, Point};
