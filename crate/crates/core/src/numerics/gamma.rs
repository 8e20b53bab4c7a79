//! Gamma function, telescoping Gamma ratios and binomial coefficients.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::check_precision;
use super::exact::ExactScalar;
use crate::error::{Error, Result};

fn is_nonpositive_integer(x: &Rational) -> bool {
    *x.denom() == 1 && x.cmp0().is_le()
}

fn pole(x: &Rational) -> Error {
    Error::Pole(x.to_string())
}

/// Γ(1−α)/Γ(m−α) as the exact rational 1/∏_{t=1}^{m−1}(t−α).
pub fn gamma_product_identity(alpha: &Rational, m: u64) -> Result<ExactScalar> {
    if alpha.cmp0().is_le() || *alpha >= 1 {
        return Err(Error::Domain(format!("alpha = {alpha} is not in (0, 1)")));
    }
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let mut prod = Rational::from(1);
    for t in 1..m {
        prod *= Rational::from(t) - alpha;
    }
    Ok(ExactScalar::real(prod.recip()))
}

/// Γ(x) at `prec` bits for rational x off the poles.
///
/// Positive integers are returned exactly as factorials. Otherwise the
/// argument is shifted to x ≥ 1 by the recurrence and Spouge's formula is
/// applied with a parameter chosen so the truncation error stays below
/// 2^{−(prec+10)}.
pub fn gamma_value(x: &Rational, prec: u32) -> Result<Complex> {
    check_precision(prec)?;
    if is_nonpositive_integer(x) {
        return Err(pole(x));
    }
    if *x.denom() == 1 {
        let k = x.numer().to_u32().ok_or_else(|| Error::Domain(format!("argument {x} too large")))?;
        let fact = Integer::from(Integer::factorial(k - 1));
        return Ok(Complex::with_val(prec, fact));
    }
    let mut y = x.clone();
    let mut shift = Rational::from(1);
    while y < 1 {
        shift *= &y;
        y += 1;
    }
    let wp = 2 * prec + 64;
    let g = spouge(&Float::with_val(wp, &y), prec, wp);
    let g = g / Float::with_val(wp, &shift);
    Ok(Complex::with_val(prec, (g, 0)))
}

/// Spouge approximation of Γ(y) for real y ≥ 1.
fn spouge(y: &Float, prec: u32, wp: u32) -> Float {
    let log2_two_pi = (2.0 * std::f64::consts::PI).log2();
    let a = (((prec + 10) as f64) / log2_two_pi).ceil().max(2.0) as u32;
    let z = Float::with_val(wp, y - 1u32);

    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut sum = two_pi.sqrt();
    let mut inv_fact = Float::with_val(wp, 1);
    for k in 1..a {
        if k > 1 {
            inv_fact /= k - 1;
        }
        let base = Float::with_val(wp, a - k);
        let half = Float::with_val(wp, k) - 0.5f64;
        let power = Float::with_val(wp, (&base).pow(&half));
        let ex = Float::with_val(wp, a - k).exp();
        let mut c = power * ex * &inv_fact;
        if k % 2 == 0 {
            c = -c;
        }
        let denom = Float::with_val(wp, &z + k);
        sum += c / denom;
    }
    let za = Float::with_val(wp, &z + a);
    let expo = Float::with_val(wp, &z + 0.5f64);
    let lead = Float::with_val(wp, (&za).pow(&expo));
    let decay = Float::with_val(wp, -za).exp();
    lead * decay * sum
}

/// ∏Γ(numerator_args) / ∏Γ(denominator_args).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRatio {
    #[serde(with = "rational_vec")]
    pub numerator_args: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub denominator_args: Vec<Rational>,
}

impl GammaRatio {
    pub fn new(numerator_args: Vec<Rational>, denominator_args: Vec<Rational>) -> Self {
        Self { numerator_args, denominator_args }
    }

    fn check_poles(&self) -> Result<()> {
        for x in self.numerator_args.iter().chain(&self.denominator_args) {
            if is_nonpositive_integer(x) {
                return Err(pole(x));
            }
        }
        Ok(())
    }

    /// Exact value when the arguments pair off with integer differences.
    ///
    /// Γ(v+k)/Γ(v) = ∏_{i<k}(v+i) collapses each pair to a rational. Returns
    /// `Ok(None)` when some argument has no partner.
    pub fn telescoped(&self) -> Result<Option<ExactScalar>> {
        self.check_poles()?;
        if self.numerator_args.len() != self.denominator_args.len() {
            return Ok(None);
        }
        let mut used = vec![false; self.denominator_args.len()];
        let mut value = Rational::from(1);
        for u in &self.numerator_args {
            let partner = self
                .denominator_args
                .iter()
                .enumerate()
                .find(|(i, v)| !used[*i] && *Rational::from(u - *v).denom() == 1);
            let Some((i, v)) = partner else {
                return Ok(None);
            };
            used[i] = true;
            let diff = Rational::from(u - v);
            let k = diff.numer().to_i64().ok_or_else(|| Error::Domain("Gamma shift too large".into()))?;
            let (base, len, invert) = if k >= 0 { (v, k, false) } else { (u, -k, true) };
            let mut prod = Rational::from(1);
            for i in 0..len {
                prod *= Rational::from(base + i);
            }
            if invert {
                value /= prod;
            } else {
                value *= prod;
            }
        }
        Ok(Some(ExactScalar::real(value)))
    }

    /// Value at `prec` bits: exact telescoping when possible, Spouge otherwise.
    pub fn evaluate(&self, prec: u32) -> Result<Complex> {
        check_precision(prec)?;
        if let Some(exact) = self.telescoped()? {
            return Ok(exact.to_complex(prec));
        }
        let wp = prec + 32;
        let mut acc = Complex::with_val(wp, 1);
        for x in &self.numerator_args {
            acc *= gamma_value(x, wp)?;
        }
        for x in &self.denominator_args {
            acc /= gamma_value(x, wp)?;
        }
        Ok(Complex::with_val(prec, acc))
    }
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> Result<ExactScalar> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) with k > n")));
    }
    let c = Integer::from(n).binomial(k.min(n - k) as u32);
    Ok(ExactScalar::real(Rational::from(c)))
}

mod rational_vec {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        use serde::de::Error;
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| crate::numerics::parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn rel_err(got: &Complex, want: &Float) -> f64 {
        let diff = Float::with_val(want.prec(), got.real() - want);
        Float::with_val(53, diff.abs() / want.clone().abs()).to_f64()
    }

    #[test]
    fn gamma_product_identity_examples() {
        assert_eq!(gamma_product_identity(&q(1, 3), 1).unwrap(), ExactScalar::one());
        assert_eq!(gamma_product_identity(&q(1, 3), 2).unwrap(), ExactScalar::from_ratio(3, 2));
        assert_eq!(gamma_product_identity(&q(1, 3), 3).unwrap(), ExactScalar::from_ratio(9, 10));
        assert!(gamma_product_identity(&q(4, 3), 3).is_err());
        assert!(gamma_product_identity(&Rational::new(), 3).is_err());
    }

    #[test]
    fn gamma_small_values() {
        let one = gamma_value(&Rational::from(1), 128).unwrap();
        assert_eq!(*one.real(), 1);
        let four = gamma_value(&Rational::from(4), 128).unwrap();
        assert_eq!(*four.real(), 6);
        let half = gamma_value(&q(1, 2), 256).unwrap();
        let sqrt_pi = Float::with_val(300, Constant::Pi).sqrt();
        assert!(rel_err(&half, &sqrt_pi) < 2f64.powi(-248));
        assert!(half.real().to_string().starts_with("1.7724538509"));
    }

    #[test]
    fn gamma_poles() {
        assert!(matches!(gamma_value(&Rational::new(), 64), Err(Error::Pole(_))));
        assert!(matches!(gamma_value(&Rational::from(-3), 64), Err(Error::Pole(_))));
        assert!(matches!(gamma_value(&q(1, 2), 32), Err(Error::Precision { .. })));
    }

    #[test]
    fn gamma_matches_mpfr_within_budget() {
        for prec in [64u32, 128, 256, 512] {
            for (n, d) in [(1, 3), (2, 3), (-5, 2), (7, 4), (123, 7), (1, 1000), (401, 3)] {
                let x = q(n, d);
                let got = gamma_value(&x, prec).unwrap();
                let want = Float::with_val(prec + 64, &x).gamma();
                let err = rel_err(&got, &want);
                assert!(err <= 2f64.powi(-(prec as i32 - 8)), "x={x} prec={prec} err={err:e}");
            }
        }
    }

    #[test]
    fn gamma_ratio_telescopes() {
        // Γ(2/3)Γ(4/3)/(Γ(5/3)Γ(1/3)) = (1/3)/(2/3) = 1/2
        let r = GammaRatio::new(vec![q(2, 3), q(4, 3)], vec![q(5, 3), q(1, 3)]);
        assert_eq!(r.telescoped().unwrap(), Some(ExactScalar::from_ratio(1, 2)));
        let float = GammaRatio::new(vec![q(2, 3), q(1, 2)], vec![q(5, 3), q(1, 3)]);
        assert_eq!(float.telescoped().unwrap(), None);
        let v = float.evaluate(128).unwrap();
        let want = Float::with_val(192, q(2, 3)).gamma() * Float::with_val(192, q(1, 2)).gamma()
            / Float::with_val(192, q(5, 3)).gamma()
            / Float::with_val(192, q(1, 3)).gamma();
        assert!(rel_err(&v, &want) < 1e-35);
        assert!(GammaRatio::new(vec![Rational::from(-1)], vec![q(1, 2)]).evaluate(64).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 0).unwrap(), ExactScalar::one());
        assert_eq!(binomial(4, 2).unwrap(), ExactScalar::from_int(6));
        assert_eq!(binomial(7, 3).unwrap(), ExactScalar::from_int(35));
        assert!(binomial(2, 3).is_err());
    }

    #[test]
    fn binomial_pascal_oracle() {
        let mut row = vec![Integer::from(1)];
        for n in 0..=200u64 {
            for (k, want) in row.iter().enumerate() {
                assert_eq!(binomial(n, k as u64).unwrap(), ExactScalar::real(Rational::from(want)));
            }
            let mut next = vec![Integer::from(1); row.len() + 1];
            for k in 1..row.len() {
                next[k] = Integer::from(&row[k - 1] + &row[k]);
            }
            row = next;
        }
    }
}
