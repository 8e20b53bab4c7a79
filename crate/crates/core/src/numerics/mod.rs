//! Scalar backends: exact Gaussian rationals, MPC complex floats, Gamma and
//! binomial helpers.

pub mod exact;
pub mod gamma;
pub mod scalar;
pub mod series;

pub use exact::{parse_rational, ExactScalar};
pub use gamma::{binomial, gamma_product_identity, gamma_value, GammaRatio};
pub use scalar::Field;
pub use series::Series;

use crate::error::{Error, Result};

/// Arbitrary-precision complex float (MPC). Precision travels with the value.
pub type BigFloatComplex = rug::Complex;

pub const DEFAULT_PRECISION: u32 = 256;
pub const MIN_PRECISION: u32 = 64;

pub fn check_precision(prec: u32) -> Result<()> {
    if prec < MIN_PRECISION {
        Err(Error::Precision { min: MIN_PRECISION, got: prec })
    } else {
        Ok(())
    }
}

/// Correctly rounded conversion, rejecting precisions below the minimum.
pub fn to_big(x: &ExactScalar, prec: u32) -> Result<BigFloatComplex> {
    check_precision(prec)?;
    Ok(x.to_complex(prec))
}

/// |x| as a double, computed in MPFR so that values far below the f64
/// range still round correctly to zero or a subnormal.
pub fn big_abs_f64(x: &BigFloatComplex) -> f64 {
    rug::Float::with_val(x.prec().0, x.abs_ref()).to_f64()
}
