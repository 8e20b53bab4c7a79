//! The functionals α_n(z), β_n^±(z) as truncated walk sums, together with
//! the closed forms and leading asymptotics available for two-term potentials.

use rug::ops::Pow;
use rug::{Complex, Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{check_precision, ExactScalar, Field, GammaRatio};
use crate::potential::{FourierPotential, TwoTermParams};
use crate::walks::{shell_counts, shell_sum, sums_by_length, ShellIndex, WalkKind};

/// Default shell caps: X-shells p ≤ 3, Y-shells q ≤ 2.
pub const DEFAULT_X_CAP: u64 = 3;
pub const DEFAULT_Y_CAP: u64 = 2;

/// Default closed-walk length cap 2(r+s).
pub fn default_w_cap(params: &TwoTermParams) -> usize {
    2 * (params.r + params.s) as usize
}

/// Heuristic size of the omitted shells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailEstimate {
    Heuristic(f64),
    /// The geometric ratio is not below 1/2, n is too small for the estimate.
    Unbounded,
}

impl TailEstimate {
    pub fn as_f64(&self) -> f64 {
        match self {
            TailEstimate::Heuristic(x) => *x,
            TailEstimate::Unbounded => f64::INFINITY,
        }
    }
}

/// A truncated evaluation of α_n, β_n^+ or β_n^-.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaValue {
    pub kind: WalkKind,
    pub n: u64,
    pub z: ExactScalar,
    pub value: ExactScalar,
    /// Number of shells (or, for α, step lengths) that were summed.
    pub shells_used: u64,
    /// Largest shell index (or step length) included in `value`.
    pub exact_through_shell: u64,
    /// Reported next to `value`, never added to it.
    pub tail_estimate: TailEstimate,
    /// Per-shell contributions in ascending order; they sum to `value`.
    pub shell_sums: Vec<ExactScalar>,
}

/// Per-shell sums of X- or Y-kind walks in the field `F`.
pub fn shell_sums_in<F: Field>(
    params: &TwoTermParams,
    n: u64,
    kind: WalkKind,
    z: &F,
    cap: u64,
    ctx: F::Ctx,
) -> Result<Vec<F>> {
    (0..=cap).map(|p| shell_sum(params, n, kind, ShellIndex(p), z, ctx)).collect()
}

/// Σ of per-shell values.
fn total<F: Field>(parts: &[F], ctx: F::Ctx) -> F {
    let mut acc = F::zero(ctx);
    for p in parts {
        acc.add_assign_ref(p);
    }
    acc
}

/// Tail heuristic |last shell| · ρ/(1−ρ).
///
/// ρ = (T/n)^{r+s} for X and W, ρ = (T/2n)^{s+1}(s+2)n for Y, with
/// T = max(|a|, |b|).
pub fn tail_bound_report(params: &TwoTermParams, n: u64, kind: WalkKind, last_shell: f64) -> TailEstimate {
    if last_shell == 0.0 {
        return TailEstimate::Heuristic(0.0);
    }
    let t = params.t_max();
    let nf = n as f64;
    let rho = match kind {
        WalkKind::X | WalkKind::W => (t / nf).powi((params.r + params.s) as i32),
        WalkKind::Y => (t / (2.0 * nf)).powi(params.s as i32 + 1) * (params.s as f64 + 2.0) * nf,
    };
    if !(rho < 0.5) {
        return TailEstimate::Unbounded;
    }
    TailEstimate::Heuristic(last_shell.abs() * rho / (1.0 - rho))
}

fn shell_functional(
    pot: &FourierPotential,
    n: u64,
    kind: WalkKind,
    z: &ExactScalar,
    cap: u64,
) -> Result<BetaValue> {
    let zero = |tail| BetaValue {
        kind,
        n,
        z: z.clone(),
        value: ExactScalar::zero(),
        shells_used: cap + 1,
        exact_through_shell: cap,
        tail_estimate: tail,
        shell_sums: vec![ExactScalar::zero(); cap as usize + 1],
    };
    if pot.is_empty() {
        return Ok(zero(TailEstimate::Heuristic(0.0)));
    }
    let params = pot
        .as_two_term()
        .ok_or_else(|| Error::Domain("shell truncation needs a two-term potential".into()))?;
    let parts = shell_sums_in(&params, n, kind, z, cap, ())?;
    let last = parts.last().map(Field::abs_f64).unwrap_or(0.0);
    Ok(BetaValue {
        kind,
        n,
        z: z.clone(),
        value: total(&parts, ()),
        shells_used: cap + 1,
        exact_through_shell: cap,
        tail_estimate: tail_bound_report(&params, n, kind, last),
        shell_sums: parts,
    })
}

/// β_n^+(z) summed over X-shells 0..=shell_cap.
pub fn beta_plus(pot: &FourierPotential, n: u64, z: &ExactScalar, shell_cap: u64) -> Result<BetaValue> {
    shell_functional(pot, n, WalkKind::X, z, shell_cap)
}

/// β_n^-(z) summed over Y-shells 0..=shell_cap.
pub fn beta_minus(pot: &FourierPotential, n: u64, z: &ExactScalar, shell_cap: u64) -> Result<BetaValue> {
    shell_functional(pot, n, WalkKind::Y, z, shell_cap)
}

/// Walk sum of the given kind over all admissible walks with at most
/// `step_cap` steps, for an arbitrary potential.
pub fn functional_by_steps(
    pot: &FourierPotential,
    n: u64,
    kind: WalkKind,
    z: &ExactScalar,
    step_cap: usize,
) -> Result<BetaValue> {
    let parts = sums_by_length(pot, n, kind, z, step_cap, ())?;
    let last = parts.iter().rev().find(|p| !p.is_zero()).map(Field::abs_f64).unwrap_or(0.0);
    let tail = match pot.as_two_term() {
        Some(params) => tail_bound_report(&params, n, kind, last),
        None => general_tail(pot, n, last),
    };
    Ok(BetaValue {
        kind,
        n,
        z: z.clone(),
        value: total(&parts, ()),
        shells_used: step_cap as u64,
        exact_through_shell: step_cap as u64,
        tail_estimate: tail,
        shell_sums: parts,
    })
}

/// For general support every extra pair of steps costs about (T/n)².
fn general_tail(pot: &FourierPotential, n: u64, last: f64) -> TailEstimate {
    if last == 0.0 {
        return TailEstimate::Heuristic(0.0);
    }
    let rho = (pot.max_modulus() * pot.support().len() as f64 / n as f64).powi(2);
    if rho < 0.5 {
        TailEstimate::Heuristic(last * rho / (1.0 - rho))
    } else {
        TailEstimate::Unbounded
    }
}

/// α_n(z) over closed walks with at most `step_cap` steps.
pub fn alpha_n(pot: &FourierPotential, n: u64, z: &ExactScalar, step_cap: usize) -> Result<BetaValue> {
    functional_by_steps(pot, n, WalkKind::W, z, step_cap)
}

/// α_n in an arbitrary field.
pub fn alpha_in<F: Field>(pot: &FourierPotential, n: u64, z: &F, step_cap: usize, ctx: F::Ctx) -> Result<F> {
    Ok(total(&sums_by_length(pot, n, WalkKind::W, z, step_cap, ctx)?, ctx))
}

/// β_n^± in an arbitrary field; zero for the empty potential.
pub fn beta_in<F: Field>(
    pot: &FourierPotential,
    n: u64,
    kind: WalkKind,
    z: &F,
    cap: u64,
    ctx: F::Ctx,
) -> Result<F> {
    if pot.is_empty() {
        return Ok(F::zero(ctx));
    }
    let params = pot
        .as_two_term()
        .ok_or_else(|| Error::Domain("shell truncation needs a two-term potential".into()))?;
    Ok(total(&shell_sums_in(&params, n, kind, z, cap, ctx)?, ctx))
}

/// True when no walk of the kind exists at index n, so the functional is
/// identically zero (decided from step-sum feasibility alone).
pub fn structurally_zero(params: &TwoTermParams, n: u64, kind: WalkKind) -> bool {
    shell_counts(params, n, kind, ShellIndex(0)).is_none()
}

fn factorial(k: u64) -> Rational {
    Rational::from(Integer::from(Integer::factorial(k as u32)))
}

fn rpow(x: &Rational, e: u64) -> Rational {
    Rational::from(x.pow(e as u32))
}

/// ∏_{t=1}^{k} (s·t − 1).
fn st_product(s: u64, k: u64) -> Rational {
    (1..=k).fold(Rational::from(1), |acc, t| acc * Rational::from(s * t - 1))
}

/// b^{rm} / ((4s²d²)^{rm−1} ((rm−1)!)²), the weight of the shortest X-walk at n = rsdm.
pub fn h_star_plus(params: &TwoTermParams, m: u64) -> Result<ExactScalar> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let rm = params.r * m;
    let base = Rational::from(4 * params.s * params.s * params.d * params.d);
    let f = factorial(rm - 1);
    let denom = rpow(&base, rm - 1) * Rational::from(&f * &f);
    Ok(params.b.pow(rm as u32).scale(&denom.recip()))
}

/// 4r²d² (a/(4r²d²))^{sm} ((sm−1)!)^{−2}, the weight of the shortest Y-walk at n = rsdm.
pub fn h_star_minus(params: &TwoTermParams, m: u64) -> Result<ExactScalar> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let sm = params.s * m;
    let c = Rational::from(4 * params.r * params.r * params.d * params.d);
    let f = factorial(sm - 1);
    let scale = (&c / rpow(&c, sm)) / Rational::from(&f * &f);
    Ok(params.a.pow(sm as u32).scale(&scale))
}

fn check_s(s: u64) -> Result<()> {
    if s < 3 {
        return Err(Error::Domain(format!("s = {s}; the formula needs s >= 3")));
    }
    Ok(())
}

/// H⁻(s, m) = 2 / ((4s)^m m! ∏_{t=1}^{m−1}(st−1)).
#[allow(non_snake_case)]
pub fn H_minus(s: u64, m: u64) -> Result<ExactScalar> {
    check_s(s)?;
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let denom = rpow(&Rational::from(4 * s), m) * factorial(m) * st_product(s, m - 1);
    Ok(ExactScalar::real(Rational::from(2) / denom))
}

/// H⁺(s, m) as the double-product sum over τ = 1..m−1.
#[allow(non_snake_case)]
pub fn H_plus(s: u64, m: u64) -> Result<ExactScalar> {
    check_s(s)?;
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let full = st_product(s, m - 1);
    let norm = rpow(&Rational::from(4 * s), m) * Rational::from(&full * &full);
    let mut sum = Rational::new();
    for tau in 1..m {
        let left = st_product(s, tau - 1) / factorial(tau);
        let right = st_product(s, m - tau - 1) / factorial(m - tau);
        sum += left * right;
    }
    Ok(ExactScalar::real(sum / norm))
}

/// Taylor coefficient A_α(k) of 1 − (1−w)^α.
#[allow(non_snake_case)]
pub fn A_alpha(alpha: &Rational, k: u64) -> Result<ExactScalar> {
    if alpha.cmp0().is_le() || *alpha >= 1 {
        return Err(Error::Domain(format!("alpha = {alpha} is not in (0, 1)")));
    }
    if k == 0 {
        return Ok(ExactScalar::zero());
    }
    let mut prod = alpha.clone();
    for t in 1..k {
        prod *= Rational::from(t) - alpha;
    }
    Ok(ExactScalar::real(prod / factorial(k)))
}

/// H⁺/H⁻ = 1 − Γ(1−α)Γ(m−2α)/(Γ(m−α)Γ(1−2α)) with α = 1/s, telescoped exactly.
pub fn ratio_h(s: u64, m: u64) -> Result<ExactScalar> {
    check_s(s)?;
    if m < 2 {
        return Err(Error::Domain("ratio_H needs m >= 2".into()));
    }
    let g = ratio_gamma(s, m);
    let t = g.telescoped()?.expect("arguments differ by integers");
    Ok(ExactScalar::one() - t)
}

fn ratio_gamma(s: u64, m: u64) -> GammaRatio {
    let alpha = Rational::from((1, s));
    let two = Rational::from(&alpha * 2u32);
    let one = Rational::from(1);
    let mq = Rational::from(m);
    GammaRatio::new(
        vec![Rational::from(&one - &alpha), Rational::from(&mq - &two)],
        vec![Rational::from(&mq - &alpha), one - two],
    )
}

/// The same ratio through the A-coefficients: 1 − A_{2α}(m)/(2A_α(m)).
pub fn ratio_h_from_a(s: u64, m: u64) -> Result<ExactScalar> {
    check_s(s)?;
    let alpha = Rational::from((1, s));
    let a1 = A_alpha(&alpha, m)?;
    let a2 = A_alpha(&Rational::from(&alpha * 2u32), m)?;
    Ok(ExactScalar::one() - &a2 / &(&a1 * &ExactScalar::from_int(2)))
}

/// Leading-order value with the order of its relative error.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticValue {
    pub leading: Complex,
    pub relative_error_order: String,
}

impl AsymptoticValue {
    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.leading.real().to_f64(), self.leading.imag().to_f64())
    }
}

impl Serialize for AsymptoticValue {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("AsymptoticValue", 2)?;
        st.serialize_field("leading", &crate::report::BigComplexRepr::from(&self.leading))?;
        st.serialize_field("relative_error_order", &self.relative_error_order)?;
        st.end()
    }
}

/// −2s·a·b^m/((2s)^{2m} m!) · Γ²(1−1/s)Γ(m−2/s)/(Γ²(m−1/s)Γ(1−2/s)) for n = sm−1.
pub fn beta_plus_leading(params: &TwoTermParams, m: u64, precision: u32) -> Result<AsymptoticValue> {
    check_precision(precision)?;
    if params.r != 1 || params.d != 1 || params.s < 3 {
        return Err(Error::Domain("needs r = 1, d = 1 and s >= 3".into()));
    }
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let s = params.s;
    let alpha = Rational::from((1, s));
    let one_a = Rational::from(1) - &alpha;
    let m_a = Rational::from(m) - &alpha;
    let two_a = Rational::from(&alpha * 2u32);
    let g = GammaRatio::new(
        vec![one_a.clone(), one_a, Rational::from(m) - &two_a],
        vec![m_a.clone(), m_a, Rational::from(1) - two_a],
    );
    let gamma = g.evaluate(precision + 32)?;
    let pref = Rational::from(-2 * s as i64) / (rpow(&Rational::from(2 * s), 2 * m) * factorial(m));
    let coeff = (&params.a * &params.b.pow(m as u32)).scale(&pref);
    let leading = Complex::with_val(precision, coeff.to_complex(precision + 32) * gamma);
    Ok(AsymptoticValue { leading, relative_error_order: "(log n)^{s+1}/n^s".into() })
}

/// a^n / (4^{n−1} ((n−1)!)²).
pub fn beta_minus_leading(a: &ExactScalar, n: u64, precision: u32) -> Result<AsymptoticValue> {
    check_precision(precision)?;
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let f = factorial(n - 1);
    let denom = rpow(&Rational::from(4), n - 1) * Rational::from(&f * &f);
    let exact = a.pow(n as u32).scale(&denom.recip());
    Ok(AsymptoticValue { leading: exact.to_complex(precision), relative_error_order: "1/n^s".into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// 4R² (c/(4R²))^m / ((m−1)!)² with c = b for β⁺ and c = a for β⁻, at n = Rm and R = S.
pub fn beta_equal_rs_leading(params: &TwoTermParams, which: Sign, m: u64, precision: u32) -> Result<AsymptoticValue> {
    check_precision(precision)?;
    if params.R != params.S {
        return Err(Error::Domain("needs R = S".into()));
    }
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let c = match which {
        Sign::Plus => &params.b,
        Sign::Minus => &params.a,
    };
    let four_r2 = Rational::from(4 * params.R * params.R);
    let f = factorial(m - 1);
    let scale = (&four_r2 / rpow(&four_r2, m)) / Rational::from(&f * &f);
    let exact = c.pow(m as u32).scale(&scale);
    Ok(AsymptoticValue { leading: exact.to_complex(precision), relative_error_order: "1/m".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma_value;
    use crate::potential::{rat, two_term_int};
    use crate::walks::enumerate_shell;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    #[test]
    fn beta_plus_examples() {
        let (p, _) = two_term_int(1, 1, 1, 3).unwrap();
        let z = ExactScalar::zero();
        assert_eq!(beta_plus(&p, 6, &z, 0).unwrap().value, q(1, 36));
        assert_eq!(beta_plus(&p, 5, &z, 0).unwrap().value, q(-1, 576));
        let e = FourierPotential::empty();
        assert!(beta_plus(&e, 7, &z, 3).unwrap().value.is_zero());
    }

    #[test]
    fn beta_minus_examples() {
        let (p, _) = two_term_int(1, 1, 1, 3).unwrap();
        let z = ExactScalar::zero();
        assert_eq!(beta_minus(&p, 3, &z, 0).unwrap().value, q(1, 64));
        assert_eq!(beta_minus(&p, 5, &z, 0).unwrap().value, q(1, 147456));
        let (p2, _) = two_term_int(1, 1, 2, 2).unwrap();
        for n in [1, 3, 5, 7] {
            assert!(beta_minus(&p2, n, &z, 4).unwrap().value.is_zero());
        }
    }

    #[test]
    fn alpha_examples() {
        let z = ExactScalar::zero();
        assert!(alpha_n(&FourierPotential::empty(), 4, &z, 4).unwrap().value.is_zero());
        let (p, _) = two_term_int(1, 1, 1, 1).unwrap();
        assert_eq!(alpha_n(&p, 4, &z, 2).unwrap().value, q(1, 30));
        let (p, _) = two_term_int(1, 1, 1, 3).unwrap();
        assert!(alpha_n(&p, 5, &z, 3).unwrap().value.is_zero());
    }

    #[test]
    fn h_star_examples() {
        let (_, t) = two_term_int(1, 1, 1, 3).unwrap();
        assert_eq!(h_star_plus(&t, 1).unwrap(), ExactScalar::one());
        assert_eq!(h_star_plus(&t, 2).unwrap(), q(1, 36));
        assert_eq!(h_star_plus(&t, 3).unwrap(), q(1, 5184));
        assert_eq!(h_star_minus(&t, 1).unwrap(), q(1, 64));
        assert_eq!(h_star_minus(&t, 2).unwrap(), q(4, 4i64.pow(6) * 14400));
        let (_, t1) = two_term_int(1, 1, 1, 1).unwrap();
        assert_eq!(h_star_minus(&t1, 1).unwrap(), ExactScalar::one());
    }

    #[test]
    fn h_examples() {
        assert_eq!(H_minus(3, 1).unwrap(), q(1, 6));
        assert_eq!(H_minus(3, 2).unwrap(), q(1, 288));
        assert_eq!(H_minus(4, 2).unwrap(), q(1, 768));
        assert_eq!(H_plus(3, 2).unwrap(), q(1, 576));
        assert!(H_plus(5, 1).unwrap().is_zero());
        assert!(H_minus(2, 3).is_err());
    }

    #[test]
    fn h_values_match_enumerated_weights() {
        for s in 3..=5u64 {
            let (p, t) = two_term_int(1, 1, 1, s).unwrap();
            for m in 2..=6u64 {
                let n = s * m - 1;
                let walks = enumerate_shell(&t, n, WalkKind::X, ShellIndex(0));
                assert_eq!(walks.len() as u64, m + 1);
                let w: Vec<_> = walks.iter().map(|x| x.weight(&p, &ExactScalar::zero()).unwrap()).collect();
                // ξ¹ and ξ^{m+1} are the first and last in lexicographic order
                assert_eq!(&w[0] + &w[m as usize], -H_minus(s, m).unwrap());
                assert_eq!(w[0], w[m as usize]);
                let middle: ExactScalar = w[1..m as usize].iter().cloned().sum();
                assert_eq!(middle, H_plus(s, m).unwrap());
            }
        }
    }

    #[test]
    fn h_minus_gamma_form() {
        for s in 3..=6u64 {
            for m in 1..=12u64 {
                let alpha = Rational::from((1, s));
                let g = crate::numerics::gamma_product_identity(&alpha, m).unwrap();
                let pref = Rational::from(2 * s) / (rpow(&Rational::from(2 * s), 2 * m) * factorial(m));
                assert_eq!(H_minus(s, m).unwrap(), g.scale(&pref));
            }
        }
    }

    #[test]
    fn a_alpha_examples() {
        let third = rat(1, 3);
        assert_eq!(A_alpha(&third, 1).unwrap(), q(1, 3));
        assert_eq!(A_alpha(&third, 2).unwrap(), q(1, 9));
        assert!(A_alpha(&third, 0).unwrap().is_zero());
        assert!(A_alpha(&rat(3, 2), 2).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_h(3, 2).unwrap(), q(1, 2));
        assert_eq!(ratio_h(4, 2).unwrap(), q(1, 3));
        let direct = &H_plus(3, 3).unwrap() / &H_minus(3, 3).unwrap();
        assert_eq!(ratio_h(3, 3).unwrap(), direct);
        assert_eq!(ratio_h_from_a(3, 3).unwrap(), direct);
    }

    #[test]
    fn plus_leading_examples() {
        let (_, t) = two_term_int(1, 1, 1, 3).unwrap();
        let v = beta_plus_leading(&t, 2, 256).unwrap();
        let want = Complex::with_val(256, (-1, 0)) / 576u32;
        assert_eq!(v.leading, want);
        let v1 = beta_plus_leading(&t, 1, 256).unwrap();
        assert_eq!(v1.leading, Complex::with_val(256, (-1, 0)) / 6u32);
        assert!(beta_plus_leading(&two_term_int(1, 1, 2, 3).unwrap().1, 2, 256).is_err());
    }

    #[test]
    fn plus_leading_matches_spouge_gamma() {
        // Evaluate the same Γ ratio argument by argument through Spouge.
        let (_, t) = two_term_int(2, 3, 1, 5).unwrap();
        for m in [2u64, 7, 19] {
            let v = beta_plus_leading(&t, m, 200).unwrap();
            let a = rat(1, 5);
            let g = |x: Rational| gamma_value(&x, 260).unwrap();
            let ratio = g(Rational::from(1) - &a) * g(Rational::from(1) - &a) * g(Rational::from(m) - rat(2, 5))
                / (g(Rational::from(m) - &a) * g(Rational::from(m) - &a) * g(rat(3, 5)));
            let pref = Rational::from(-10) / (rpow(&Rational::from(10), 2 * m) * factorial(m));
            let exact = ExactScalar::from_int(2 * 3i64.pow(m as u32)).scale(&pref);
            let want = Complex::with_val(260, exact.to_complex(260) * ratio);
            let err = Complex::with_val(260, &v.leading - &want).abs().real().to_f64()
                / want.clone().abs().real().to_f64();
            assert!(err < 1e-55, "m={m} err={err:e}");
        }
    }

    #[test]
    fn plus_leading_sign_is_negative() {
        let (_, t) = two_term_int(1, 1, 1, 3).unwrap();
        for m in 1..=20 {
            assert!(beta_plus_leading(&t, m, 128).unwrap().leading.real().is_sign_negative());
        }
    }

    #[test]
    fn minus_leading_examples() {
        let v = beta_minus_leading(&ExactScalar::one(), 3, 128).unwrap();
        assert_eq!(v.leading, ExactScalar::from_ratio(1, 64).to_complex(128));
        let v = beta_minus_leading(&ExactScalar::one(), 5, 128).unwrap();
        assert_eq!(v.leading, ExactScalar::from_ratio(1, 147456).to_complex(128));
        let v = beta_minus_leading(&ExactScalar::from_int(2), 3, 128).unwrap();
        assert_eq!(v.leading, ExactScalar::from_ratio(1, 8).to_complex(128));
    }

    #[test]
    fn equal_rs_leading_examples() {
        let (_, t) = two_term_int(1, 1, 1, 1).unwrap();
        assert_eq!(beta_equal_rs_leading(&t, Sign::Plus, 1, 64).unwrap().to_c64().re, 1.0);
        let (p2, t2) = two_term_int(1, 1, 2, 2).unwrap();
        let v = beta_equal_rs_leading(&t2, Sign::Plus, 2, 64).unwrap();
        assert_eq!(v.to_c64().re, 1.0 / 16.0);
        assert_eq!(beta_plus(&p2, 4, &ExactScalar::zero(), 0).unwrap().value, q(1, 16));
        let (p3, t3) = two_term_int(3, 1, 1, 1).unwrap();
        let v = beta_equal_rs_leading(&t3, Sign::Minus, 2, 64).unwrap();
        assert_eq!(v.to_c64().re, 9.0 / 4.0);
        assert_eq!(beta_minus(&p3, 2, &ExactScalar::zero(), 0).unwrap().value, q(9, 4));
    }

    #[test]
    fn tail_examples() {
        let (p, t) = two_term_int(1, 1, 1, 3).unwrap();
        assert_eq!(tail_bound_report(&t, 8, WalkKind::X, 0.0), TailEstimate::Heuristic(0.0));
        assert_eq!(tail_bound_report(&t, 1, WalkKind::X, 1.0), TailEstimate::Unbounded);
        let z = ExactScalar::zero();
        let v = beta_plus(&p, 8, &z, 1).unwrap();
        let shell0 = v.shell_sums[0].abs_f64();
        let TailEstimate::Heuristic(est) = v.tail_estimate else { panic!("unbounded") };
        assert!(est > 0.0 && est < shell0 * 1e-2);
        let next = shell_sum(&t, 8, WalkKind::X, ShellIndex(2), &z, ()).unwrap().abs_f64();
        assert!(next < shell0 * 1e-2, "shell 2 = {next:e}, estimate = {est:e}");
    }

    #[test]
    fn beta_in_agrees_with_exact() {
        let (p, _) = two_term_int(1, 2, 1, 3).unwrap();
        let z = ExactScalar::new(rat(1, 2), rat(-1, 3));
        let exact = beta_plus(&p, 11, &z, 3).unwrap().value;
        let big = beta_in(&p, 11, WalkKind::X, &z.to_complex(200), 3, 200).unwrap();
        let diff = Complex::with_val(200, &big - &exact.to_complex(200));
        assert!(crate::numerics::big_abs_f64(&diff) <= exact.abs_f64() * 1e-50);
    }
}
