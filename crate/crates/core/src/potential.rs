//! Trigonometric-polynomial potentials v(x) = Σ V(m) e^{imx} on even frequencies.

use std::collections::BTreeMap;

use rug::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{parse_rational, ExactScalar};

/// Finite Fourier expansion with even nonzero frequencies and nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FourierPotential {
    coeffs: BTreeMap<i64, ExactScalar>,
}

impl FourierPotential {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a potential from `(m, V(m))` terms. Repeated frequencies are
    /// summed and zero coefficients are dropped.
    pub fn new<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, ExactScalar)>,
    {
        let mut coeffs: BTreeMap<i64, ExactScalar> = BTreeMap::new();
        for (m, v) in terms {
            if m == 0 {
                return Err(Error::Domain("frequency 0 is not allowed (V(0) = 0)".into()));
            }
            if m % 2 != 0 {
                return Err(Error::Domain(format!("frequency {m} is odd; support must lie in 2Z")));
            }
            *coeffs.entry(m).or_default() += &v;
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(Self { coeffs })
    }

    /// V(m), zero when m is not in the support.
    pub fn coefficient(&self, m: i64) -> ExactScalar {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    pub fn coefficient_ref(&self, m: i64) -> Option<&ExactScalar> {
        self.coeffs.get(&m)
    }

    /// Frequencies with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<i64> {
        self.coeffs.keys().copied().collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactScalar)> {
        self.coeffs.iter().map(|(m, v)| (*m, v))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest |m| in the support, 0 for the empty potential.
    pub fn max_frequency(&self) -> i64 {
        self.coeffs.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    /// max |V(m)| as a double.
    pub fn max_modulus(&self) -> f64 {
        self.coeffs.values().map(|v| v.to_c64().norm()).fold(0.0, f64::max)
    }

    /// Recognizes a·e^{−2iRx} + b·e^{2iSx}.
    pub fn as_two_term(&self) -> Option<TwoTermParams> {
        let supp = self.support();
        match supp.as_slice() {
            [neg, pos] if *neg < 0 && *pos > 0 => TwoTermParams::new(
                self.coeffs[neg].clone(),
                self.coeffs[pos].clone(),
                (-neg / 2) as u64,
                (pos / 2) as u64,
            )
            .ok(),
            _ => None,
        }
    }

    /// Same support, every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &ExactScalar) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn to_spec(&self) -> PotentialSpec {
        PotentialSpec::Terms {
            terms: self
                .coeffs
                .iter()
                .map(|(m, v)| TermSpec { m: *m, re: v.re().to_string(), im: v.im().to_string() })
                .collect(),
        }
    }
}

/// Parameters of v = a·e^{−2iRx} + b·e^{2iSx} with R = d·r, S = d·s, d = gcd(R, S).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[allow(non_snake_case)]
pub struct TwoTermParams {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub R: u64,
    pub S: u64,
    pub d: u64,
    pub r: u64,
    pub s: u64,
}

impl TwoTermParams {
    #[allow(non_snake_case)]
    pub fn new(a: ExactScalar, b: ExactScalar, R: u64, S: u64) -> Result<Self> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::Domain("two-term coefficients a and b must be nonzero".into()));
        }
        if R == 0 || S == 0 {
            return Err(Error::Domain("R and S must be positive".into()));
        }
        let d = Integer::from(R).gcd(&Integer::from(S)).to_u64().expect("gcd fits in u64");
        Ok(Self { a, b, R, S, d, r: R / d, s: S / d })
    }

    pub fn potential(&self) -> FourierPotential {
        let terms = [(-2 * self.R as i64, self.a.clone()), (2 * self.S as i64, self.b.clone())];
        FourierPotential::new(terms).expect("two-term frequencies are even and nonzero")
    }

    /// T = max(|a|, |b|).
    pub fn t_max(&self) -> f64 {
        self.a.to_c64().norm().max(self.b.to_c64().norm())
    }

    /// Exact comparison of |a|² and |b|².
    pub fn moduli_equal(&self) -> bool {
        self.a.norm_sqr() == self.b.norm_sqr()
    }
}

/// v = a·e^{−2iRx} + b·e^{2iSx} together with its parameters.
#[allow(non_snake_case)]
pub fn two_term(
    a: ExactScalar,
    b: ExactScalar,
    R: u64,
    S: u64,
) -> Result<(FourierPotential, TwoTermParams)> {
    let params = TwoTermParams::new(a, b, R, S)?;
    Ok((params.potential(), params))
}

/// Integer-coefficient shorthand, mostly for tests and presets.
#[allow(non_snake_case)]
pub fn two_term_int(a: i64, b: i64, R: u64, S: u64) -> Result<(FourierPotential, TwoTermParams)> {
    two_term(ExactScalar::from_int(a), ExactScalar::from_int(b), R, S)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub m: i64,
    pub re: String,
    #[serde(default = "zero")]
    pub im: String,
}

fn zero() -> String {
    "0".into()
}

/// JSON literal for a potential: either explicit terms or the two-term shorthand.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(non_snake_case)]
pub enum PotentialSpec {
    Terms { terms: Vec<TermSpec> },
    TwoTerm { a: ExactScalar, b: ExactScalar, R: u64, S: u64 },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<FourierPotential> {
        match self {
            PotentialSpec::Terms { terms } => FourierPotential::new(
                terms
                    .iter()
                    .map(|t| Ok((t.m, ExactScalar::new(parse_rational(&t.re)?, parse_rational(&t.im)?))))
                    .collect::<Result<Vec<_>>>()?,
            ),
            PotentialSpec::TwoTerm { a, b, R, S } => {
                Ok(two_term(a.clone(), b.clone(), *R, *S)?.0)
            }
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("potential: {e}")))
    }
}

/// Exact rational helper used across modules.
#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> rug::Rational {
    rug::Rational::from((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_term_examples() {
        let (p, t) = two_term_int(1, 1, 1, 3).unwrap();
        assert_eq!(p.coefficient(-2), ExactScalar::one());
        assert_eq!(p.coefficient(6), ExactScalar::one());
        assert_eq!((t.d, t.r, t.s), (1, 1, 3));
        let (_, t) = two_term_int(2, 5, 4, 6).unwrap();
        assert_eq!((t.d, t.r, t.s), (2, 2, 3));
        let (p, t) = two_term_int(1, 1, 5, 5).unwrap();
        assert_eq!((t.d, t.r, t.s), (5, 1, 1));
        assert_eq!(p.support(), vec![-10, 10]);
        assert!(two_term_int(0, 1, 1, 1).is_err());
        assert!(two_term_int(1, 1, 0, 1).is_err());
    }

    #[test]
    fn coefficients_and_support() {
        let (p, _) = two_term_int(1, 1, 1, 3).unwrap();
        assert_eq!(p.coefficient(4), ExactScalar::zero());
        assert_eq!(p.support(), vec![-2, 6]);
        let (p, _) = two_term_int(3, 7, 2, 2).unwrap();
        assert_eq!(p.coefficient(4), ExactScalar::from_int(7));
        assert!(FourierPotential::empty().support().is_empty());
    }

    #[test]
    fn rejects_bad_frequencies_and_drops_zeros() {
        assert!(FourierPotential::new([(3, ExactScalar::one())]).is_err());
        assert!(FourierPotential::new([(0, ExactScalar::one())]).is_err());
        let p = FourierPotential::new([(2, ExactScalar::one()), (2, ExactScalar::from_int(-1))]).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn recognizes_two_term_shape() {
        let (p, t) = two_term_int(2, 3, 2, 4).unwrap();
        assert_eq!(p.as_two_term(), Some(t));
        let three = FourierPotential::new([
            (-2, ExactScalar::one()),
            (2, ExactScalar::one()),
            (4, ExactScalar::one()),
        ])
        .unwrap();
        assert_eq!(three.as_two_term(), None);
    }

    #[test]
    fn json_literals() {
        let spec = PotentialSpec::parse(r#"{"terms":[{"m":-2,"re":"1","im":"0"},{"m":6,"re":"1/2"}]}"#).unwrap();
        let p = spec.build().unwrap();
        assert_eq!(p.coefficient(6), ExactScalar::from_ratio(1, 2));
        let short = PotentialSpec::parse(r#"{"a":"1","b":"1","R":1,"S":3}"#).unwrap();
        assert_eq!(short.build().unwrap().support(), vec![-2, 6]);
        let back = PotentialSpec::parse(&serde_json::to_string(&p.to_spec()).unwrap()).unwrap();
        assert_eq!(back.build().unwrap(), p);
        assert!(PotentialSpec::parse(r#"{"terms":[{"m":3,"re":"1"}]}"#).unwrap().build().is_err());
    }

    #[test]
    fn equal_moduli_is_exact() {
        let a = ExactScalar::from_int(3);
        let b = &ExactScalar::new(rat(9, 5), rat(12, 5)) * &ExactScalar::i();
        let t = TwoTermParams::new(a, b, 3, 3).unwrap();
        assert!(t.moduli_equal());
    }
}
