//! Special functions: gamma family, hypergeometric series, spherical Bessel.

mod bessel;
pub mod dd;
mod gamma;
mod hyper;

pub use bessel::{bessel_j_series, spherical_bessel_j, spherical_bessel_ratio};
pub use gamma::{digamma, gamma, gamma_ratio, ln_gamma, pochhammer, reciprocal_gamma, sin_pi};
pub(crate) use hyper::gauss_2f1_complement;
pub use hyper::{gauss_2f1, hyp_3f2_unit, kummer_m, kummer_m_scaled};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which side of the negative real axis a cut argument is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSide {
    /// `z + i0`, giving `e^{i pi nu} (-z)^nu`.
    Above,
    /// `z - i0`, giving `e^{-i pi nu} (-z)^nu`.
    Below,
}

/// Principal power `z^nu` with `arg z` in `(-pi, pi]`.
///
/// On the negative real axis the side must be given explicitly.
pub fn complex_power(z: Complex64, nu: f64, side: Option<BranchSide>) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        if nu > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::InvalidParameter(format!("0^{nu} is undefined")));
    }
    if z.im == 0.0 && z.re < 0.0 {
        let mag = (-z.re).powf(nu);
        let phase = match side.ok_or(Error::MissingBranchSide)? {
            BranchSide::Above => PI * nu,
            BranchSide::Below => -PI * nu,
        };
        return Ok(Complex64::from_polar(mag, phase));
    }
    let (r, theta) = z.to_polar();
    Ok(Complex64::from_polar(r.powf(nu), nu * theta))
}
