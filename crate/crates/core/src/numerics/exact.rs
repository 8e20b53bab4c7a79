//! Exact Gaussian-rational scalars.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex64;
use rug::{Complex, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A complex number with rational real and imaginary parts.
///
/// `rug::Rational` keeps every value canonical (positive denominator, lowest
/// terms) after each operation, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
}

impl ExactScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(Rational::new(), Rational::from(1))
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(Rational::from(v), Rational::new())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(Rational::from((num, den)), Rational::new())
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::new())
    }

    /// Exact value of a finite double (every finite `f64` is a dyadic rational).
    pub fn from_f64(re: f64, im: f64) -> Result<Self> {
        let conv = |v: f64| {
            Rational::from_f64(v).ok_or_else(|| Error::Domain(format!("non-finite value {v}")))
        };
        Ok(Self::new(conv(re)?, conv(im)?))
    }

    pub fn from_complex64(z: Complex64) -> Result<Self> {
        Self::from_f64(z.re, z.im)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == Ordering::Equal
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Rational::from(-&self.im))
    }

    /// |x|^2 as an exact rational.
    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        let re = Rational::from(&self.re / &d);
        let im = -Rational::from(&self.im / &d);
        Some(Self::new(re, im))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(Rational::from(&self.re * k), Rational::from(&self.im * k))
    }

    /// Correctly rounded conversion at `prec` bits.
    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (&self.re, &self.im))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `p/q` for real values, `p/q+r/si` otherwise.
    pub fn to_rational_string(&self) -> String {
        self.to_string()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<Rational> for ExactScalar {
    fn from(v: Rational) -> Self {
        Self::real(v)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        if self.re.cmp0() == Ordering::Equal {
            return write!(f, "{}i", self.im);
        }
        if self.im.cmp0() == Ordering::Less {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// Parses a rational literal: an integer `"-3"` or a fraction `"7/12"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| Error::Parse(format!("not a rational literal: {s:?}")))
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts a real rational (`"3/4"`) or `"re,im"` with two rationals.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(',') {
            Some((re, im)) => Ok(Self::new(parse_rational(re)?, parse_rational(im)?)),
            None => Ok(Self::real(parse_rational(s)?)),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ExactRepr {
    re: String,
    #[serde(default = "zero_string")]
    im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ExactInput {
    Pair(ExactRepr),
    Str(String),
    Int(i64),
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ExactRepr { re: self.re.to_string(), im: self.im.to_string() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let parsed = match ExactInput::deserialize(de)? {
            ExactInput::Pair(p) => parse_rational(&p.re)
                .and_then(|re| parse_rational(&p.im).map(|im| Self::new(re, im))),
            ExactInput::Str(s) => s.parse(),
            ExactInput::Int(v) => Ok(Self::from_int(v)),
        };
        parsed.map_err(D::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(Rational::from(&self.re + &rhs.re), Rational::from(&self.im + &rhs.im))
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(Rational::from(&self.re - &rhs.re), Rational::from(&self.im - &rhs.im))
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_real() && rhs.is_real() {
            return ExactScalar::real(Rational::from(&self.re * &rhs.re));
        }
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        ExactScalar::new(re, im)
    }
}

impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero; use [`ExactScalar::recip`] to handle it.
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        let inv = rhs.recip().expect("division of ExactScalar by zero");
        self * &inv
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re, -self.im)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -(self.clone())
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl std::iter::Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::one(), |acc, x| &acc * &x)
    }
}
