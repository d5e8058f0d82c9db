//! Fractional differentiation with orthogonal-polynomial kernels.
//!
//! - [`specfun`]: gamma, hypergeometric and Bessel functions.
//! - [`fracops`]: reference operators (power laws, Riemann-Liouville
//!   quadrature, Grunwald-Letnikov differences).
//! - [`kernels`]: continuous Jacobi and Laguerre fractional kernels.
//! - [`hahn`]: discrete Hahn filter weights and their application.
//! - [`transfer`]: transfer functions, filter metrics and frequency sweeps.
//! - [`figures`]: the data sets behind the standard frequency-response plots.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod exec;
pub mod figures;
pub mod fracops;
pub mod hahn;
pub mod kernels;
pub mod quad;
pub mod specfun;
pub mod transfer;

pub use error::{Error, Result};
pub use exec::Execution;
pub use num_complex::Complex64;
