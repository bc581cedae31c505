//! Multiple-scattering frequency-time hybrid solver for the 2D wave equation
//! with Dirichlet data on smooth closed curves and open arcs.

// `!(x > 0.0)` is used on purpose so that NaN fails validation; oracle
// constants keep every digit they were frozen with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bie;
pub mod cli;
pub mod error;
pub mod ftransform;
pub mod geometry;
pub mod harness;
pub mod incident;
pub mod linalg;
pub mod multiscatter;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
