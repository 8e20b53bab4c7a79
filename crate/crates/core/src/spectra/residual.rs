//! Cross-check of Galerkin eigenvalues against the reduced 2×2 equation
//! (z − α_n(z))² = β_n^−(z) β_n^+(z).

use num_complex::Complex64;
use rug::Complex;

use crate::beta::{alpha_in, beta_in, default_w_cap};
use crate::error::{Error, Result};
use crate::numerics::{big_abs_f64, check_precision};
use crate::potential::{FourierPotential, TwoTermParams};
use crate::walks::WalkKind;

/// |(z − α)² − β⁻β⁺| at z = λ − n², with β⁺ over X-shells ≤ caps.0, β⁻ over
/// Y-shells ≤ caps.1 and α over closed walks of length ≤ 2(r+s).
pub fn reduction_residual(
    pot: &FourierPotential,
    params: Option<&TwoTermParams>,
    n: u64,
    lambda: Complex64,
    caps: (u64, u64),
    precision: u32,
) -> Result<f64> {
    check_precision(precision)?;
    let nn = (n * n) as f64;
    let z64 = lambda - Complex64::new(nn, 0.0);
    if z64.norm() >= n as f64 / 4.0 {
        return Err(Error::Domain(format!("|z| = {} is not below n/4 = {}", z64.norm(), n as f64 / 4.0)));
    }
    if pot.is_empty() {
        return Ok(z64.norm_sqr());
    }
    let params = match params {
        Some(p) => p.clone(),
        None => pot
            .as_two_term()
            .ok_or_else(|| Error::Domain("reduction residual needs a two-term potential".into()))?,
    };
    let p = precision;
    let z = Complex::with_val(p, (lambda.re, lambda.im)) - Complex::with_val(p, n * n);
    let alpha = alpha_in(pot, n, &z, default_w_cap(&params), p)?;
    let bp = beta_in(pot, n, WalkKind::X, &z, caps.0, p)?;
    let bm = beta_in(pot, n, WalkKind::Y, &z, caps.1, p)?;
    let d = Complex::with_val(p, &z - &alpha);
    let lhs = Complex::with_val(p, &d * &d);
    let rhs = Complex::with_val(p, &bm * &bp);
    Ok(big_abs_f64(&Complex::with_val(p, lhs - rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_operator_residual_vanishes() {
        let z = FourierPotential::empty();
        assert_eq!(reduction_residual(&z, None, 5, Complex64::new(25.0, 0.0), (3, 2), 128).unwrap(), 0.0);
    }

    #[test]
    fn rejects_far_lambda() {
        let z = FourierPotential::empty();
        assert!(reduction_residual(&z, None, 4, Complex64::new(20.0, 0.0), (3, 2), 128).is_err());
    }
}
