use hillbasis::beta::{
    alpha_n, beta_minus, beta_minus_leading, beta_plus, beta_plus_leading, h_star_minus, h_star_plus, ratio_h,
    ratio_h_from_a, tail_bound_report, A_alpha, TailEstimate, DEFAULT_X_CAP, DEFAULT_Y_CAP, H_minus, H_plus,
};
use hillbasis::numerics::{ExactScalar, Series};
use hillbasis::potential::{two_term_int, FourierPotential};
use hillbasis::walks::{shell_sum, ShellIndex, WalkKind};
use rug::{Integer, Rational};

fn fact(k: u64) -> Rational {
    Rational::from(Integer::from(Integer::factorial(k as u32)))
}

/// Weight of the straight walk of `len` equal steps of size `step` from `start`,
/// computed vertex by vertex.
fn straight_walk(n: u64, len: u64, step: i64, coeff: &ExactScalar) -> ExactScalar {
    let nn = (n * n) as i64;
    let mut j = if step > 0 { -(n as i64) } else { n as i64 };
    let mut den = Rational::from(1);
    for _ in 1..len {
        j += step;
        den *= Rational::from(nn - j * j);
    }
    coeff.pow(len as u32).scale(&den.recip())
}

/// H⁻ straight from its product form.
fn h_minus_oracle(s: u64, m: u64) -> Rational {
    let mut den = Rational::from(4 * s).pow_u(m) * fact(m);
    for t in 1..m {
        den *= Rational::from(s * t - 1);
    }
    Rational::from(2) / den
}

trait PowU {
    fn pow_u(self, e: u64) -> Rational;
}

impl PowU for Rational {
    fn pow_u(self, e: u64) -> Rational {
        (0..e).fold(Rational::from(1), |acc, _| acc * &self)
    }
}

#[test]
fn shell_zero_at_multiples_matches_straight_walks() {
    let z = ExactScalar::zero();
    for (a, b, big_r, big_s) in [(1, 1, 1, 3), (2, -3, 1, 4), (1, 1, 2, 6), (3, 1, 2, 3), (-1, 2, 3, 5)] {
        let (pot, p) = two_term_int(a, b, big_r, big_s).unwrap();
        let base = p.r * p.s * p.d;
        for m in 1..=4u64 {
            let n = base * m;
            let plus = beta_plus(&pot, n, &z, 0).unwrap().value;
            let minus = beta_minus(&pot, n, &z, 0).unwrap().value;
            assert_eq!(plus, straight_walk(n, p.r * m, 2 * big_s as i64, &p.b), "({a},{b},{big_r},{big_s}) m={m}");
            assert_eq!(minus, straight_walk(n, p.s * m, -2 * big_r as i64, &p.a));
            assert_eq!(plus, h_star_plus(&p, m).unwrap());
            assert_eq!(minus, h_star_minus(&p, m).unwrap());
        }
    }
}

#[test]
fn shell_zero_below_multiples_matches_h_difference() {
    let z = ExactScalar::zero();
    for s in 3..=5u64 {
        for (a, b) in [(1i64, 1i64), (2, -1), (-3, 5)] {
            let (pot, p) = two_term_int(a, b, 1, s).unwrap();
            for m in 1..=8u64 {
                let n = s * m - 1;
                let plus = beta_plus(&pot, n, &z, 0).unwrap().value;
                let h = &H_plus(s, m).unwrap() - &H_minus(s, m).unwrap();
                assert_eq!(plus, &(&p.a * &p.b.pow(m as u32)) * &h, "s={s} m={m}");
                let minus = beta_minus(&pot, n, &z, 0).unwrap().value;
                let four = Rational::from(4).pow_u(n - 1);
                let f = fact(n - 1);
                let want = p.a.pow(n as u32).scale(&(four * &f * &f).recip());
                assert_eq!(minus, want);
                assert_eq!(minus, straight_walk(n, n, -2, &p.a));
            }
        }
    }
}

#[test]
fn h_minus_product_form() {
    for s in 3..=8 {
        for m in 1..=15 {
            assert_eq!(H_minus(s, m).unwrap(), ExactScalar::real(h_minus_oracle(s, m)));
        }
    }
}

#[test]
fn convolution_identity() {
    for s in 3..=12i64 {
        let alpha = Rational::from((1, s));
        let two = Rational::from(&alpha * 2u32);
        let a: Vec<ExactScalar> = (0..=50).map(|k| A_alpha(&alpha, k).unwrap()).collect();
        for m in 1..=50usize {
            let lhs: ExactScalar = (1..m).map(|t| &a[t] * &a[m - t]).sum();
            let rhs = &(&a[m] * &ExactScalar::from_int(2)) - &A_alpha(&two, m as u64).unwrap();
            assert_eq!(lhs, rhs, "s={s} m={m}");
        }
    }
}

#[test]
fn a_alpha_is_the_taylor_series_of_one_minus_power() {
    for s in 3..=12i64 {
        let alpha = Rational::from((1, s));
        let series = Series::one_minus_pow(&alpha, 31);
        for k in 0..=30u64 {
            let want = if k == 0 { Rational::from(1) - series.coeff(0) } else { -series.coeff(k as usize).clone() };
            assert_eq!(A_alpha(&alpha, k).unwrap(), ExactScalar::real(want), "s={s} k={k}");
        }
    }
}

#[test]
fn gamma_ratio_equals_h_ratio() {
    for s in 3..=5 {
        for m in 2..=10 {
            let direct = &H_plus(s, m).unwrap() / &H_minus(s, m).unwrap();
            assert_eq!(ratio_h(s, m).unwrap(), direct, "s={s} m={m}");
            assert_eq!(ratio_h_from_a(s, m).unwrap(), direct);
        }
    }
    assert_eq!(ratio_h(3, 2).unwrap(), ExactScalar::from_ratio(1, 2));
}

#[test]
fn gap_dominance() {
    for s in 3..=12 {
        for m in 1..=30 {
            let gap = &H_minus(s, m).unwrap() - &H_plus(s, m).unwrap();
            assert!(gap.re().cmp0().is_gt() && gap.im().cmp0().is_eq(), "s={s} m={m}");
        }
    }
}

#[test]
fn ratio_collapse_is_strictly_decreasing() {
    let (pot, _) = two_term_int(1, 1, 1, 3).unwrap();
    let z = ExactScalar::zero();
    let mut prev: Option<Rational> = None;
    for m in 2..=8u64 {
        let n = 3 * m - 1;
        let plus = beta_plus(&pot, n, &z, DEFAULT_X_CAP).unwrap().value;
        let minus = beta_minus(&pot, n, &z, DEFAULT_Y_CAP).unwrap().value;
        let r = minus.norm_sqr() / plus.norm_sqr();
        if let Some(p) = &prev {
            assert!(r < *p, "m={m}");
        }
        prev = Some(r);
    }
}

#[test]
fn two_sided_stability_on_the_unit_disc() {
    let (pot, _) = two_term_int(1, 1, 1, 3).unwrap();
    let zs = [
        ExactScalar::zero(),
        ExactScalar::one(),
        -ExactScalar::one(),
        ExactScalar::i(),
        -ExactScalar::i(),
    ];
    for m in 4..=10u64 {
        let n = 3 * m - 1;
        let p0 = beta_plus(&pot, n, &zs[0], DEFAULT_X_CAP).unwrap().value.to_c64().norm();
        let m0 = beta_minus(&pot, n, &zs[0], DEFAULT_Y_CAP).unwrap().value.to_c64().norm();
        for z in &zs[1..] {
            let p = beta_plus(&pot, n, z, DEFAULT_X_CAP).unwrap().value.to_c64().norm();
            let q = beta_minus(&pot, n, z, DEFAULT_Y_CAP).unwrap().value.to_c64().norm();
            assert!(0.5 * p0 <= p && p <= 2.0 * p0, "beta+ n={n} z={z}");
            assert!(0.5 * m0 <= q && q <= 2.0 * m0, "beta- n={n} z={z}");
        }
    }
}

#[test]
fn tail_estimate_brackets_the_next_shell() {
    let (pot, p) = two_term_int(1, 1, 1, 3).unwrap();
    let z = ExactScalar::zero();
    let v = beta_plus(&pot, 8, &z, 1).unwrap();
    let total: ExactScalar = v.shell_sums.iter().cloned().sum();
    assert_eq!(total, v.value);
    let shell0 = v.shell_sums[0].to_c64().norm();
    let TailEstimate::Heuristic(est) = v.tail_estimate else { panic!("unbounded tail at n = 8") };
    assert!(est > 0.0 && est < shell0 * 1e-2);
    let next = shell_sum(&p, 8, WalkKind::X, ShellIndex(2), &z, ()).unwrap().to_c64().norm();
    assert!(next < shell0 * 1e-2);
    assert_eq!(tail_bound_report(&p, 1, WalkKind::X, 1.0), TailEstimate::Unbounded);
    assert_eq!(tail_bound_report(&p, 8, WalkKind::Y, 0.0), TailEstimate::Heuristic(0.0));
}

#[test]
fn leading_terms_track_exact_values() {
    let (pot, p) = two_term_int(1, 1, 1, 3).unwrap();
    let z = ExactScalar::zero();
    for m in [4u64, 6, 8] {
        let n = 3 * m - 1;
        let exact = beta_plus(&pot, n, &z, DEFAULT_X_CAP).unwrap().value.to_c64();
        let lead = beta_plus_leading(&p, m, 128).unwrap().to_c64();
        assert!((exact / lead - 1.0).norm() < 0.5, "m={m}");
        let exact = beta_minus(&pot, n, &z, DEFAULT_Y_CAP).unwrap().value.to_c64();
        let lead = beta_minus_leading(&p.a, n, 128).unwrap().to_c64();
        assert!((exact / lead - 1.0).norm() < 0.1, "m={m}");
    }
}

#[test]
fn alpha_vanishes_for_the_zero_potential() {
    for n in 1..=10 {
        let v = alpha_n(&FourierPotential::empty(), n, &ExactScalar::from_ratio(1, 3), 6).unwrap();
        assert!(v.value.is_zero());
    }
}
