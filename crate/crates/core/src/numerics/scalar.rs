//! A minimal field abstraction so the walk sums can run over exact
//! rationals, hardware complex numbers, or MPC complex numbers.

use num_complex::Complex64;
use rug::Complex;

use super::exact::ExactScalar;

pub trait Field: Clone + Send + Sync {
    /// Construction context: `()` for fixed-size types, the precision in bits
    /// for `rug::Complex`.
    type Ctx: Copy + Send + Sync;

    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn from_exact(x: &ExactScalar, ctx: Self::Ctx) -> Self;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn recip_checked(&self) -> Option<Self>;
    fn is_zero_value(&self) -> bool;
    /// Modulus as a double, for reporting and tail estimates.
    fn abs_f64(&self) -> f64;
}

impl Field for ExactScalar {
    type Ctx = ();

    fn zero(_: ()) -> Self {
        ExactScalar::zero()
    }
    fn one(_: ()) -> Self {
        ExactScalar::one()
    }
    fn from_exact(x: &ExactScalar, _: ()) -> Self {
        x.clone()
    }
    fn from_i64(v: i64, _: ()) -> Self {
        ExactScalar::from_int(v)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip_checked(&self) -> Option<Self> {
        self.recip()
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
    fn abs_f64(&self) -> f64 {
        // Through MPFR so tiny values do not underflow in the intermediate square.
        let c = self.to_complex(64);
        c.abs().real().to_f64()
    }
}

impl Field for Complex64 {
    type Ctx = ();

    fn zero(_: ()) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one(_: ()) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_exact(x: &ExactScalar, _: ()) -> Self {
        x.to_c64()
    }
    fn from_i64(v: i64, _: ()) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn recip_checked(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(self.inv())
        }
    }
    fn is_zero_value(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
}

impl Field for Complex {
    type Ctx = u32;

    fn zero(prec: u32) -> Self {
        Complex::new(prec)
    }
    fn one(prec: u32) -> Self {
        Complex::with_val(prec, 1)
    }
    fn from_exact(x: &ExactScalar, prec: u32) -> Self {
        x.to_complex(prec)
    }
    fn from_i64(v: i64, prec: u32) -> Self {
        Complex::with_val(prec, v)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Complex::with_val(self.prec(), self * rhs)
    }
    fn recip_checked(&self) -> Option<Self> {
        if self.is_zero_value() {
            None
        } else {
            Some(Complex::with_val(self.prec(), self.recip_ref()))
        }
    }
    fn is_zero_value(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn abs_f64(&self) -> f64 {
        Complex::with_val(self.prec(), self.abs_ref()).real().to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip<F: Field>(ctx: F::Ctx) -> f64 {
        let x = ExactScalar::from_ratio(3, 4);
        let y = F::from_exact(&x, ctx);
        let mut s = y.mul_ref(&y.recip_checked().unwrap());
        s.add_assign_ref(&F::from_i64(-1, ctx));
        s.abs_f64()
    }

    #[test]
    fn backends_agree_on_simple_identities() {
        assert_eq!(roundtrip::<ExactScalar>(()), 0.0);
        assert!(roundtrip::<Complex64>(()) < 1e-15);
        assert!(roundtrip::<Complex>(128) < 1e-35);
        assert!(<Complex as Field>::zero(64).recip_checked().is_none());
        assert!(<Complex64 as Field>::zero(()).recip_checked().is_none());
    }

    #[test]
    fn exact_abs_handles_tiny_values() {
        let tiny = ExactScalar::from_ratio(1, 3).pow(900);
        let a = tiny.abs_f64();
        assert!(a == 0.0 || a.is_finite());
        let small = ExactScalar::from_ratio(1, 1 << 40);
        assert_eq!(small.abs_f64(), 2f64.powi(-40));
    }
}
