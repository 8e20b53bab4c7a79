//! Serialization helpers shared by reports.

use num_complex::Complex64;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

/// Decimal rendering of an MPC value with all significant digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigComplexRepr {
    pub re: String,
    pub im: String,
}

fn digits(f: &Float) -> String {
    let n = (f.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
    f.to_string_radix(10, Some(n))
}

impl From<&Complex> for BigComplexRepr {
    fn from(c: &Complex) -> Self {
        Self { re: digits(c.real()), im: digits(c.imag()) }
    }
}

/// A hardware complex number as `{re, im}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<C64> for Complex64 {
    fn from(z: C64) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Serde adapter for `Complex64` fields.
pub mod c64 {
    use super::C64;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        C64::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        C64::deserialize(d).map(Into::into)
    }
}

/// Serde adapter for `Option<Complex64>` fields.
pub mod opt_c64 {
    use super::C64;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(C64::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Option::<C64>::deserialize(d).map(|o| o.map(Into::into))
    }
}
