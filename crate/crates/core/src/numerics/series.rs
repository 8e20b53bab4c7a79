//! Truncated power series with exact rational coefficients.

use rug::Rational;

/// Coefficients c_0..c_{len-1} of a formal power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn new(mut coeffs: Vec<Rational>, len: usize) -> Self {
        coeffs.resize(len, Rational::new());
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// log(1 − w) = −Σ_{k≥1} w^k / k.
    pub fn log_one_minus(len: usize) -> Self {
        let coeffs = (0..len)
            .map(|k| if k == 0 { Rational::new() } else { Rational::from((-1, k as i64)) })
            .collect();
        Self { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| Rational::from(x * c)).collect() }
    }

    /// exp(f) for f with zero constant term, via k·g_k = Σ_{j=1}^{k} j·f_j·g_{k−j}.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs.first().is_none_or(|c| c.cmp0().is_eq()), "exp needs f(0) = 0");
        let len = self.len();
        let mut g = vec![Rational::new(); len];
        if len == 0 {
            return Self { coeffs: g };
        }
        g[0] = Rational::from(1);
        for k in 1..len {
            let mut acc = Rational::new();
            for j in 1..=k {
                acc += Rational::from(&self.coeffs[j] * &g[k - j]) * j as u64;
            }
            g[k] = acc / k as u64;
        }
        Self { coeffs: g }
    }

    /// (1 − w)^α as exp(α·log(1 − w)).
    pub fn one_minus_pow(alpha: &Rational, len: usize) -> Self {
        Self::log_one_minus(len).scale(alpha).exp()
    }
}
