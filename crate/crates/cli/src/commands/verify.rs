use hillbasis::beta::{beta_minus, beta_plus, h_star_minus, h_star_plus, ratio_h, A_alpha, H_minus, H_plus};
use hillbasis::numerics::{gamma_product_identity, ExactScalar, GammaRatio, Series};
use hillbasis::potential::{two_term, TwoTermParams};
use hillbasis::spectra::pairs::in_class;
use hillbasis::spectra::{assemble, eigenvalues, reduction_residual, spectrum, working_n, BoundaryCondition};
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::args::Format;
use crate::commands::spectrum::config;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output;

const RESIDUAL_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, expected: impl Into<String>, outcome: Result<String, String>) -> Self {
        let (passed, actual) = match outcome {
            Ok(a) => (true, a),
            Err(a) => (false, a),
        };
        Self { name: name.into(), passed, expected: expected.into(), actual }
    }

    fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}: expected {}; actual {}", self.name, self.expected, self.actual)
    }
}

fn factorial(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

fn pow4(e: u64) -> Rational {
    Rational::from(Integer::from(Integer::u_pow_u(4, e as u32)))
}

/// a^n / (4^{n−1} ((n−1)!)²).
fn straight_minus(a: &ExactScalar, n: u64) -> ExactScalar {
    let f = factorial(n - 1);
    a.pow(n as u32).scale(&(pow4(n - 1) * Rational::from(&f * &f)).recip())
}

fn mismatch(what: &str, n: u64, got: &ExactScalar, want: &ExactScalar) -> String {
    format!("{what} differs at n = {n}: enumerated {got}, closed form {want}")
}

/// Shell-0 identities at a = b = 1 for one s; `shift` is added to a on the
/// enumerated side only.
fn shell0(s: u64, shift: &Option<Rational>, ms: &[u64]) -> CliResult<Vec<CheckResult>> {
    let one = ExactScalar::one();
    let a_enum = match shift {
        Some(d) => &one + &ExactScalar::real(d.clone()),
        None => one.clone(),
    };
    let (pot, _) = two_term(a_enum, one.clone(), 1, s).map_err(CliError::from_lib)?;
    let closed = TwoTermParams::new(one.clone(), one, 1, s).map_err(CliError::from_lib)?;
    let z = ExactScalar::zero();
    let lib = CliError::from_lib;

    let mut plus_sm1 = Ok(String::new());
    let mut minus_sm1 = Ok(String::new());
    let mut plus_sm = Ok(String::new());
    let mut minus_sm = Ok(String::new());
    for &m in ms {
        let n = s * m - 1;
        if plus_sm1.is_ok() {
            let got = beta_plus(&pot, n, &z, 0).map_err(lib)?.value;
            let h = &H_plus(s, m).map_err(lib)? - &H_minus(s, m).map_err(lib)?;
            let want = &(&closed.a * &closed.b.pow(m as u32)) * &h;
            if got != want {
                plus_sm1 = Err(mismatch("β⁺", n, &got, &want));
            }
        }
        if minus_sm1.is_ok() {
            let got = beta_minus(&pot, n, &z, 0).map_err(lib)?.value;
            let want = straight_minus(&closed.a, n);
            if got != want {
                minus_sm1 = Err(mismatch("β⁻", n, &got, &want));
            }
        }
        let n = s * m;
        if plus_sm.is_ok() {
            let got = beta_plus(&pot, n, &z, 0).map_err(lib)?.value;
            let want = h_star_plus(&closed, m).map_err(lib)?;
            if got != want {
                plus_sm = Err(mismatch("β⁺", n, &got, &want));
            }
        }
        if minus_sm.is_ok() {
            let got = beta_minus(&pot, n, &z, 0).map_err(lib)?.value;
            let want = h_star_minus(&closed, m).map_err(lib)?;
            if got != want {
                minus_sm = Err(mismatch("β⁻", n, &got, &want));
            }
        }
    }
    let m_max = ms.last().copied().unwrap_or(0);
    let ok = |r: Result<String, String>| r.map(|_| format!("equal for m ≤ {m_max}"));
    Ok(vec![
        CheckResult::new(format!("shell-0 β⁺ at n = {s}m − 1"), "a·b^m·(H⁺ − H⁻)", ok(plus_sm1)),
        CheckResult::new(format!("shell-0 β⁻ at n = {s}m − 1"), "a^n / (4^(n−1)·((n−1)!)²)", ok(minus_sm1)),
        CheckResult::new(format!("shell-0 β⁺ at n = {s}m"), "shortest X-walk weight", ok(plus_sm)),
        CheckResult::new(format!("shell-0 β⁻ at n = {s}m"), "shortest Y-walk weight", ok(minus_sm)),
    ])
}

fn convolution() -> CliResult<CheckResult> {
    let lib = CliError::from_lib;
    for s in 3..=12i64 {
        let alpha = Rational::from((1, s));
        let two = Rational::from(&alpha * 2u32);
        let a: Vec<ExactScalar> = (0..=50).map(|k| A_alpha(&alpha, k)).collect::<Result<_, _>>().map_err(lib)?;
        for m in 1..=50usize {
            let lhs: ExactScalar = (1..m).map(|t| &a[t] * &a[m - t]).sum();
            let rhs = &(&a[m] * &ExactScalar::from_int(2)) - &A_alpha(&two, m as u64).map_err(lib)?;
            if lhs != rhs {
                return Ok(CheckResult::new(
                    "convolution identity",
                    "Σ A(τ)A(m−τ) = 2A_α(m) − A_2α(m)",
                    Err(format!("differs at s = {s}, m = {m}: {lhs} vs {rhs}")),
                ));
            }
        }
    }
    Ok(CheckResult::new(
        "convolution identity",
        "Σ A(τ)A(m−τ) = 2A_α(m) − A_2α(m)",
        Ok("equal for α = 1/s, s ∈ 3..12, m ≤ 50".into()),
    ))
}

fn taylor() -> CliResult<CheckResult> {
    let expected = "A_α(k) = −[w^k](1 − w)^α";
    for s in 3..=12i64 {
        let alpha = Rational::from((1, s));
        let series = Series::one_minus_pow(&alpha, 31);
        for k in 1..=30usize {
            let got = A_alpha(&alpha, k as u64).map_err(CliError::from_lib)?;
            let want = ExactScalar::real(-series.coeff(k).clone());
            if got != want {
                return Ok(CheckResult::new(
                    "Taylor coefficients",
                    expected,
                    Err(format!("differs at s = {s}, k = {k}: {got} vs {want}")),
                ));
            }
        }
    }
    Ok(CheckResult::new("Taylor coefficients", expected, Ok("equal for s ∈ 3..12, k ≤ 30".into())))
}

fn gamma_ratio() -> CliResult<Vec<CheckResult>> {
    let lib = CliError::from_lib;
    let mut bad = None;
    'outer: for s in 3..=5 {
        for m in 2..=10 {
            let direct = &H_plus(s, m).map_err(lib)? / &H_minus(s, m).map_err(lib)?;
            let via = ratio_h(s, m).map_err(lib)?;
            if via != direct {
                bad = Some(format!("differs at s = {s}, m = {m}: {via} vs {direct}"));
                break 'outer;
            }
        }
    }
    let half = ratio_h(3, 2).map_err(lib)?;
    Ok(vec![
        CheckResult::new(
            "Γ-ratio form of H⁺/H⁻",
            "telescoped Γ ratio = H⁺/H⁻",
            bad.map_or_else(|| Ok("equal for s ∈ {3,4,5}, m ≤ 10".into()), Err),
        ),
        CheckResult::new(
            "ratio_H(3, 2)",
            "1/2",
            if half == ExactScalar::from_ratio(1, 2) { Ok(half.to_string()) } else { Err(half.to_string()) },
        ),
    ])
}

/// Exact at m = 40 whatever the working precision.
fn factorial_identity() -> CliResult<Vec<CheckResult>> {
    let lib = CliError::from_lib;
    let alpha = Rational::from((1, 3));
    let m = 40u64;
    let direct = gamma_product_identity(&alpha, m).map_err(lib)?;
    let ratio = GammaRatio::new(vec![Rational::from(1) - &alpha], vec![Rational::from(m) - &alpha]);
    let tele = ratio.telescoped().map_err(lib)?;
    let gamma = CheckResult::new(
        "Γ(1−α)/Γ(40−α) at α = 1/3",
        "1/∏(t − α) over t < 40",
        match tele {
            Some(t) if t == direct => Ok("telescoped ratio equal".into()),
            Some(t) => Err(format!("telescoped {t} vs product {direct}")),
            None => Err("ratio did not telescope".into()),
        },
    );
    let (pot, p) = two_term(ExactScalar::one(), ExactScalar::one(), 1, 3).map_err(lib)?;
    let got = beta_minus(&pot, m, &ExactScalar::zero(), 0).map_err(lib)?.value;
    let want = straight_minus(&p.a, m);
    let fact = CheckResult::new(
        "factorial identity at n = 40",
        "a^40 / (4^39·(39!)²)",
        if got == want { Ok("equal".into()) } else { Err(mismatch("β⁻", m, &got, &want)) },
    );
    Ok(vec![gamma, fact])
}

fn residuals(settings: &Settings) -> CliResult<CheckResult> {
    let pot = &settings.potential;
    let params = pot.as_two_term().ok_or_else(|| CliError::usage("verify needs a two-term potential"))?;
    let mut worst: f64 = 0.0;
    let mut failure = None;
    let mut cfg = config(settings, false);
    cfg.n_max = Some(12.max(settings.k as u64 / 2).min(settings.k as u64));
    for bc in [BoundaryCondition::PerPlus, BoundaryCondition::PerMinus] {
        let rep = spectrum(pot, bc, &cfg).map_err(CliError::from_lib)?;
        for n in (6..=12).filter(|&n| in_class(bc, n)) {
            let Some(pair) = rep.pair(n) else {
                failure.get_or_insert(format!("no {bc} pair at n = {n}"));
                continue;
            };
            for lam in [pair.lambda_minus, pair.lambda_plus] {
                let r = reduction_residual(pot, Some(&params), n, lam, settings.caps, settings.precision)
                    .map_err(CliError::from_lib)?;
                worst = worst.max(r);
                if r > RESIDUAL_TOL {
                    failure.get_or_insert(format!("{bc} n = {n}: residual {r:e}"));
                }
            }
        }
    }
    Ok(CheckResult::new(
        format!("reduction residuals, n ∈ 6..12, K = {}", settings.k),
        format!("≤ {RESIDUAL_TOL:e}"),
        failure.map_or_else(|| Ok(format!("max {worst:.2e}")), Err),
    ))
}

fn localization(settings: &Settings) -> CliResult<CheckResult> {
    let n_max = 12.min(settings.k as u64);
    let mut found = Vec::new();
    for bc in [BoundaryCondition::PerPlus, BoundaryCondition::PerMinus] {
        let op = assemble(&settings.potential, bc, settings.k).map_err(CliError::from_lib)?;
        let eigs = eigenvalues(&op.matrix).map_err(CliError::from_lib)?;
        found.push(format!("{bc} N = {}", working_n(&eigs, bc, n_max)));
        if working_n(&eigs, bc, n_max) >= 4 {
            return Ok(CheckResult::new("localization", "N < 4", Err(found.join(", "))));
        }
    }
    Ok(CheckResult::new("localization", "N < 4", Ok(found.join(", "))))
}

pub struct Summary {
    pub text: String,
    pub passed: bool,
}

pub fn run(settings: &Settings) -> CliResult<Summary> {
    let ms: Vec<u64> = (1..=8).collect();
    let shells: Vec<Vec<CheckResult>> =
        [3u64, 4, 5].par_iter().map(|&s| shell0(s, &settings.perturb, &ms)).collect::<CliResult<_>>()?;
    let mut checks: Vec<CheckResult> = shells.into_iter().flatten().collect();
    checks.push(convolution()?);
    checks.push(taylor()?);
    checks.extend(gamma_ratio()?);
    checks.extend(factorial_identity()?);
    checks.push(residuals(settings)?);
    checks.push(localization(settings)?);
    let passed = checks.iter().all(|c| c.passed);
    let text = match settings.format {
        Format::Json => output::json(&checks)?,
        Format::Csv => output::csv(
            &["name", "status", "expected", "actual"],
            &checks
                .iter()
                .map(|c| {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    vec![c.name.clone(), tag.into(), c.expected.clone(), c.actual.clone()]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            let failed = checks.iter().filter(|c| !c.passed).count();
            let mut lines: Vec<String> = checks.iter().map(CheckResult::line).collect();
            lines.push(format!("{} checks, {failed} failed", checks.len()));
            lines.join("\n") + "\n"
        }
    };
    Ok(Summary { text, passed })
}
