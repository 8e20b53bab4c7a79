use hillbasis::numerics::{binomial, gamma_product_identity, gamma_value, ExactScalar, GammaRatio, Series};
use hillbasis::Error;
use proptest::prelude::*;
use rug::{Complex, Float, Rational};

fn descending_product(alpha: &Rational, m: u64) -> Rational {
    (1..m).fold(Rational::from(1), |acc, t| acc * (Rational::from(t) - alpha))
}

#[test]
fn gamma_product_identity_inverts_the_descending_product() {
    for den in 2..=10i64 {
        for num in 1..den {
            let alpha = Rational::from((num, den));
            for m in 1..=50 {
                let g = gamma_product_identity(&alpha, m).unwrap();
                let back = g.re().clone() * descending_product(&alpha, m);
                assert_eq!(back, 1, "alpha = {alpha}, m = {m}");
                assert!(g.im().cmp0().is_eq());
            }
        }
    }
}

#[test]
fn pascal_rule_up_to_200() {
    for n in 1..=200u64 {
        for k in 1..n {
            let lhs = binomial(n, k).unwrap();
            let rhs = &binomial(n - 1, k - 1).unwrap() + &binomial(n - 1, k).unwrap();
            assert_eq!(lhs, rhs, "C({n},{k})");
        }
        assert_eq!(binomial(n, 0).unwrap(), ExactScalar::one());
        assert_eq!(binomial(n, n).unwrap(), ExactScalar::one());
    }
    assert!(matches!(binomial(3, 4), Err(Error::Domain(_))));
}

#[test]
fn gamma_matches_mpfr() {
    for (p, q) in [(1, 3), (2, 3), (1, 2), (7, 5), (-1, 3), (-5, 2), (31, 7), (1, 11)] {
        let x = Rational::from((p, q));
        for prec in [64u32, 128, 256] {
            let got = gamma_value(&x, prec).unwrap();
            let want = Float::with_val(prec + 64, &x).gamma();
            let err = Float::with_val(prec + 64, got.real() - &want).abs() / want.clone().abs();
            let budget = Float::with_val(prec + 64, Float::i_exp(1, -(prec as i32 - 8)));
            assert!(err <= budget, "Γ({x}) at {prec} bits: rel err {}", err.to_f64());
        }
    }
    assert!(matches!(gamma_value(&Rational::from(-2), 128), Err(Error::Pole(_))));
}

#[test]
fn telescoped_gamma_ratio_agrees_with_floats() {
    let a = Rational::from((1, 3));
    let r = GammaRatio::new(
        vec![Rational::from(1) - &a, Rational::from(5) - Rational::from(&a * 2u32)],
        vec![Rational::from(5) - &a, Rational::from(1) - Rational::from(&a * 2u32)],
    );
    let exact = r.telescoped().unwrap().expect("integer-shifted arguments");
    let float = r.evaluate(200).unwrap();
    let diff = Complex::with_val(200, exact.to_complex(200) - float).abs().real().to_f64();
    assert!(diff < 1e-50);
}

#[test]
fn series_matches_binomial_expansion() {
    // (1 − w)^α = Σ C(α, k)(−w)^k with C(α, k) = α(α−1)…(α−k+1)/k!.
    for s in 3..=12i64 {
        let alpha = Rational::from((1, s));
        let series = Series::one_minus_pow(&alpha, 31);
        let mut c = Rational::from(1);
        for k in 0..=30u64 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(*series.coeff(k as usize), Rational::from(&c * sign), "s = {s}, k = {k}");
            c = c * (Rational::from(&alpha - k)) / Rational::from(k + 1);
        }
    }
}

proptest! {
    #[test]
    fn exact_to_big_round_trip(p in -10_000i64..10_000, q in 1i64..10_000, r in -10_000i64..10_000, t in 1i64..10_000, prec in 64u32..400) {
        let x = ExactScalar::new(Rational::from((p, q)), Rational::from((r, t)));
        let z = x.to_complex(prec);
        let wp = prec + 64;
        let exact_re = Float::with_val(wp, x.re());
        let exact_im = Float::with_val(wp, x.im());
        let tol = Float::with_val(wp, Float::i_exp(1, 1 - prec as i32));
        for (got, want) in [(z.real(), exact_re), (z.imag(), exact_im)] {
            let err = Float::with_val(wp, got - &want).abs();
            let scale = want.abs();
            prop_assert!(err <= Float::with_val(wp, &tol * &scale));
        }
    }

    #[test]
    fn exact_field_axioms(p in -50i64..50, q in 1i64..20, r in -50i64..50, t in 1i64..20) {
        let x = ExactScalar::new(Rational::from((p, q)), Rational::from((r, t)));
        let y = ExactScalar::new(Rational::from((r, t)), Rational::from((q, 7)));
        prop_assert_eq!(&(&x * &y) / &y, x.clone());
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!((&x * &x.conj()).re().clone(), x.norm_sqr());
        let parsed: ExactScalar = format!("{},{}", x.re(), x.im()).parse().unwrap();
        prop_assert_eq!(parsed, x.clone());
        let json = serde_json::to_string(&x).unwrap();
        let back: ExactScalar = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, x);
    }
}
