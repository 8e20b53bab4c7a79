//! Riesz-basis criteria for the root functions of periodic and antiperiodic
//! Hill operators, and rule-based verdicts for two-term potentials.
//!
//! Every verdict carries a per-index evidence table. A finite table cannot
//! decide a limsup, so numerical conclusions go through configurable
//! thresholds; where an analytic rule applies it decides and the numbers are
//! attached as corroboration.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::beta::{beta_in, beta_minus, beta_plus, structurally_zero, BetaValue, TailEstimate};
use crate::error::{Error, Result};
use crate::numerics::{check_precision, ExactScalar};
use crate::potential::{FourierPotential, TwoTermParams};
use crate::report::C64;
use crate::spectra::pairs::in_class;
use crate::spectra::{spectrum, BoundaryCondition, SpectralPair, SpectrumConfig, SpectrumReport};
use crate::walks::WalkKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    C1,
    C2,
    C3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    ContainsBasis,
    NoBasis,
    Inconclusive,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::ContainsBasis => "contains-basis",
            Conclusion::NoBasis => "no-basis",
            Conclusion::Inconclusive => "inconclusive",
        })
    }
}

/// How the final conclusion was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Rule,
    Thresholds,
}

/// Desk-scale surrogate for limsup t_n < ∞.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// no-basis needs the last value above this.
    pub divergence: f64,
    /// contains-basis needs every value at or below this.
    pub cap: f64,
    /// Length of the strictly increasing tail required for no-basis.
    pub monotone_window: usize,
    /// contains-basis is withheld when the last window increases strictly by
    /// more than this factor overall.
    pub growth_factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { divergence: 1e3, cap: 1e2, monotone_window: 3, growth_factor: 2.0 }
    }
}

impl Thresholds {
    /// Applies the thresholds to the monitored values in index order.
    pub fn conclude(&self, values: &[f64]) -> Conclusion {
        if values.is_empty() {
            return Conclusion::Inconclusive;
        }
        let w = self.monotone_window.max(1);
        let mut trending = false;
        if values.len() >= w {
            let tail = &values[values.len() - w..];
            let growing = w > 1 && tail.windows(2).all(|p| p[1] > p[0]);
            if growing && tail[w - 1] > self.divergence {
                return Conclusion::NoBasis;
            }
            trending = growing && tail[w - 1] > self.growth_factor * tail[0];
        }
        if !trending && values.iter().all(|v| *v <= self.cap) {
            return Conclusion::ContainsBasis;
        }
        Conclusion::Inconclusive
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Both,
}

impl Parity {
    pub fn of_bc(bc: BoundaryCondition) -> Self {
        match bc {
            BoundaryCondition::PerPlus => Parity::Even,
            BoundaryCondition::PerMinus => Parity::Odd,
            BoundaryCondition::Dirichlet => Parity::Both,
        }
    }

    fn admits(self, n: u64) -> bool {
        match self {
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
            Parity::Both => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    /// Multiples of lcm(R, S) = r·s·d.
    RsdMultiples,
    /// n = s·m − 1, for R = 1.
    SmMinusOne,
    /// n ≢ 0 mod R.
    ModRNonzero,
    /// n ≡ 0 mod R.
    RMultiples,
    Explicit(Vec<u64>),
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(list) = t.strip_prefix("list:") {
            let ns = list
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<u64>().map_err(|e| Error::Parse(format!("index {x:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Generator::Explicit(ns));
        }
        match t {
            "rsd-multiples" => Ok(Generator::RsdMultiples),
            "sm-minus-1" => Ok(Generator::SmMinusOne),
            "mod-R-nonzero" | "mod-r-nonzero" => Ok(Generator::ModRNonzero),
            "R-multiples" | "r-multiples" => Ok(Generator::RMultiples),
            other => Err(Error::Parse(format!(
                "unknown index set {other:?}; expected rsd-multiples, sm-minus-1, mod-R-nonzero, R-multiples or list:n1,n2,..."
            ))),
        }
    }
}

/// A finite window of an index set Δ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    pub generator: Generator,
    pub parity: Parity,
    pub n_min: u64,
    pub n_max: u64,
}

impl IndexSet {
    pub fn new(generator: Generator, parity: Parity, range: RangeInclusive<u64>) -> Self {
        Self { generator, parity, n_min: *range.start(), n_max: *range.end() }
    }

    /// The members, ascending, without duplicates.
    pub fn indices(&self, params: Option<&TwoTermParams>) -> Result<Vec<u64>> {
        let need = || params.ok_or_else(|| Error::Config("this index set needs a two-term potential".into()));
        let lo = self.n_min.max(1);
        let mut out: Vec<u64> = match &self.generator {
            Generator::Explicit(ns) => ns.iter().copied().filter(|n| (lo..=self.n_max).contains(n)).collect(),
            Generator::RsdMultiples => {
                let p = need()?;
                let step = p.r * p.s * p.d;
                (lo..=self.n_max).filter(|n| n % step == 0).collect()
            }
            Generator::SmMinusOne => {
                let p = need()?;
                if p.R != 1 {
                    return Err(Error::Config(format!("sm-minus-1 needs R = 1, got R = {}", p.R)));
                }
                (lo..=self.n_max).filter(|n| (n + 1) % p.s == 0).collect()
            }
            Generator::ModRNonzero => {
                let p = need()?;
                (lo..=self.n_max).filter(|n| n % p.R != 0).collect()
            }
            Generator::RMultiples => {
                let p = need()?;
                (lo..=self.n_max).filter(|n| n % p.R == 0).collect()
            }
        };
        out.retain(|n| self.parity.admits(*n));
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn describe(&self) -> String {
        let g = match &self.generator {
            Generator::RsdMultiples => "multiples of r·s·d".to_string(),
            Generator::SmMinusOne => "n = s·m − 1".to_string(),
            Generator::ModRNonzero => "n ≢ 0 mod R".to_string(),
            Generator::RMultiples => "n ≡ 0 mod R".to_string(),
            Generator::Explicit(ns) => format!("explicit {ns:?}"),
        };
        let p = match self.parity {
            Parity::Even => ", even",
            Parity::Odd => ", odd",
            Parity::Both => "",
        };
        format!("{g}{p}, {} ≤ n ≤ {}", self.n_min, self.n_max)
    }
}

/// Membership of an index in the Δ₀/Δ₁ split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexClass {
    /// Both functionals vanish identically, or the pair is double.
    Delta0,
    /// Both functionals nonzero, or the pair is simple.
    Delta1,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvidenceRow {
    pub n: u64,
    pub class: IndexClass,
    /// The monitored quantity; absent on Δ₀ rows.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
}

impl EvidenceRow {
    fn delta0(n: u64) -> Self {
        Self { n, class: IndexClass::Delta0, value: None, extra: BTreeMap::new() }
    }

    fn delta1(n: u64, value: f64) -> Self {
        Self { n, class: IndexClass::Delta1, value: Some(value), extra: BTreeMap::new() }
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.extra.insert(key.to_string(), v);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub description: String,
    pub index_set: IndexSet,
    pub delta0: Vec<u64>,
    pub delta1: Vec<u64>,
    /// A statement about Δ₀ that holds for every index, not only the tested ones.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisVerdict {
    pub criterion: Criterion,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bc: Option<BoundaryCondition>,
    pub potential: String,
    /// What `rows[].value` holds.
    pub quantity: String,
    pub delta: DeltaReport,
    pub rows: Vec<EvidenceRow>,
    pub conclusion: Conclusion,
    pub decided_by: Decision,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    /// What the thresholds alone give on the Δ₁ rows in the parity class.
    pub numerical_conclusion: Conclusion,
    /// Whether the table passes the checks attached to the rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corroborated: Option<bool>,
    pub thresholds: Thresholds,
    pub caveats: Vec<String>,
}

const LIMSUP_CAVEAT: &str = "the limsup over n is extrapolated from finitely many indices";

impl BasisVerdict {
    fn from_rows(
        criterion: Criterion,
        bc: Option<BoundaryCondition>,
        potential: String,
        quantity: &str,
        delta: DeltaReport,
        rows: Vec<EvidenceRow>,
        thresholds: &Thresholds,
    ) -> Self {
        let values: Vec<f64> = rows
            .iter()
            .filter(|r| r.class == IndexClass::Delta1 && bc.is_none_or(|b| in_class(b, r.n)))
            .filter_map(|r| r.value)
            .collect();
        let has_rows = rows.iter().any(|r| bc.is_none_or(|b| in_class(b, r.n)));
        let numerical = if values.is_empty() && has_rows {
            Conclusion::ContainsBasis
        } else {
            thresholds.conclude(&values)
        };
        let mut caveats = vec![LIMSUP_CAVEAT.to_string()];
        if values.is_empty() && has_rows {
            caveats.push("every tested index lies in Δ₀".into());
        }
        Self {
            criterion,
            bc,
            potential,
            quantity: quantity.to_string(),
            delta,
            rows,
            conclusion: numerical,
            decided_by: Decision::Thresholds,
            rule: None,
            numerical_conclusion: numerical,
            corroborated: None,
            thresholds: thresholds.clone(),
            caveats,
        }
    }

    fn decide_by_rule(mut self, conclusion: Conclusion, rule: String, corroborated: Option<bool>) -> Self {
        self.conclusion = conclusion;
        self.decided_by = Decision::Rule;
        self.rule = Some(rule);
        self.corroborated = corroborated;
        self
    }
}

fn describe_params(p: &TwoTermParams) -> String {
    format!("a = {}, b = {}, R = {}, S = {}", p.a, p.b, p.R, p.S)
}

fn describe_potential(pot: &FourierPotential) -> String {
    match pot.as_two_term() {
        Some(p) => describe_params(&p),
        None => {
            let terms: Vec<String> = pot.terms().map(|(m, v)| format!("({v})·e^{{{m}ix}}")).collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
    }
}

fn nonzero_or_degenerate(x: bool, what: &str) -> Result<()> {
    if x {
        Err(Error::Degenerate(format!("{what} vanishes; route the index to Δ₀")))
    } else {
        Ok(())
    }
}

/// t_n = max(|β⁻/β⁺|, |β⁺/β⁻|).
pub fn t_n(beta_plus: Complex64, beta_minus: Complex64) -> Result<f64> {
    nonzero_or_degenerate(beta_plus.norm_sqr() == 0.0, "β⁺")?;
    nonzero_or_degenerate(beta_minus.norm_sqr() == 0.0, "β⁻")?;
    let r = beta_minus.norm() / beta_plus.norm();
    Ok(r.max(1.0 / r))
}

/// t_n² as an exact rational.
pub fn t_n_sqr_exact(beta_plus: &ExactScalar, beta_minus: &ExactScalar) -> Result<Rational> {
    nonzero_or_degenerate(beta_plus.is_zero(), "β⁺")?;
    nonzero_or_degenerate(beta_minus.is_zero(), "β⁻")?;
    let q = beta_minus.norm_sqr() / beta_plus.norm_sqr();
    Ok(if q >= 1 { q } else { q.recip() })
}

/// t_n from exact values, rounded once at the end.
pub fn t_n_exact(beta_plus: &ExactScalar, beta_minus: &ExactScalar) -> Result<f64> {
    Ok(sqrt_f64(&t_n_sqr_exact(beta_plus, beta_minus)?))
}

/// t_n from MPC values.
pub fn t_n_big(beta_plus: &Complex, beta_minus: &Complex) -> Result<f64> {
    let prec = beta_plus.prec().0.max(beta_minus.prec().0);
    let bp = Float::with_val(prec, beta_plus.abs_ref());
    let bm = Float::with_val(prec, beta_minus.abs_ref());
    nonzero_or_degenerate(bp.is_zero(), "β⁺")?;
    nonzero_or_degenerate(bm.is_zero(), "β⁻")?;
    let r = bm / bp;
    Ok(if r >= 1 { r.to_f64() } else { r.recip().to_f64() })
}

fn sqrt_f64(q: &Rational) -> f64 {
    Float::with_val(128, q).sqrt().to_f64()
}

/// Natural log of √q for a positive rational.
fn half_ln(q: &Rational, prec: u32) -> f64 {
    (Float::with_val(prec, q).ln() / 2u32).to_f64()
}

fn c64_json(x: &ExactScalar) -> Value {
    json!(C64::from(x.to_c64()))
}

fn tail_json(t: &TailEstimate) -> Value {
    match t {
        TailEstimate::Heuristic(x) => json!(x),
        TailEstimate::Unbounded => json!("unbounded"),
    }
}

/// Sample points of the two-sided bound over |z| ≤ 1.
fn a2_points() -> [ExactScalar; 4] {
    [ExactScalar::from_int(1), ExactScalar::from_int(-1), ExactScalar::i(), -ExactScalar::i()]
}

/// min and max of |β(z)/β(0)| over the sample points, both kinds together.
fn a2_extremes(pot: &FourierPotential, n: u64, caps: (u64, u64), bp0: &ExactScalar, bm0: &ExactScalar) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, 0f64);
    for z in a2_points() {
        let p = beta_plus(pot, n, &z, caps.0)?.value;
        let m = beta_minus(pot, n, &z, caps.1)?.value;
        for q in [p.norm_sqr() / bp0.norm_sqr(), m.norm_sqr() / bm0.norm_sqr()] {
            let v = sqrt_f64(&q);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    Ok((lo, hi))
}

/// Structural Δ₀ statement for a whole parity class: every index n with
/// gcd(R, S) ∤ n carries no walks of either kind.
pub fn structural_delta0(params: &TwoTermParams, parity: Parity) -> Option<String> {
    if parity == Parity::Odd && params.d.is_multiple_of(2) {
        Some(format!(
            "gcd(R, S) = {} is even, so −R·p + S·q = ±n has no solution for odd n: β⁺ = β⁻ ≡ 0 on every odd n",
            params.d
        ))
    } else if params.d > 1 {
        Some(format!("β⁺ = β⁻ ≡ 0 exactly on the n with {} ∤ n", params.d))
    } else {
        None
    }
}

fn c1_row(pot: &FourierPotential, params: &TwoTermParams, n: u64, z: &ExactScalar, caps: (u64, u64)) -> Result<EvidenceRow> {
    let zero_p = structurally_zero(params, n, WalkKind::X);
    let zero_m = structurally_zero(params, n, WalkKind::Y);
    if zero_p && zero_m {
        return Ok(EvidenceRow::delta0(n).with("structural", json!(true)));
    }
    let bp = beta_plus(pot, n, z, caps.0)?;
    let bm = beta_minus(pot, n, z, caps.1)?;
    let t = t_n_exact(&bp.value, &bm.value)?;
    let mut row = EvidenceRow::delta1(n, t)
        .with("beta_plus", c64_json(&bp.value))
        .with("beta_minus", c64_json(&bm.value))
        .with("tail_plus", tail_json(&bp.tail_estimate))
        .with("tail_minus", tail_json(&bm.tail_estimate));
    if z.is_zero() {
        let (lo, hi) = a2_extremes(pot, n, caps, &bp.value, &bm.value)?;
        row = row.with("a2_min", json!(lo)).with("a2_max", json!(hi));
    }
    Ok(row)
}

/// Criterion 1: t_n(z) over Δ₁, with Δ₀ detected from step-sum feasibility.
pub fn criterion1_verdict(
    pot: &FourierPotential,
    index_set: &IndexSet,
    z: &ExactScalar,
    caps: (u64, u64),
    thresholds: &Thresholds,
) -> Result<BasisVerdict> {
    let params = pot
        .as_two_term()
        .ok_or_else(|| Error::Domain("criterion 1 evaluation needs a two-term potential".into()))?;
    let ns = index_set.indices(Some(&params))?;
    let rows: Vec<EvidenceRow> = ns.par_iter().map(|&n| c1_row(pot, &params, n, z, caps)).collect::<Result<_>>()?;
    let delta = split(index_set, &rows, structural_delta0(&params, index_set.parity));
    let mut v = BasisVerdict::from_rows(
        Criterion::C1,
        None,
        describe_params(&params),
        &format!("t_n({z}) from exact walk sums, X-shells ≤ {}, Y-shells ≤ {}", caps.0, caps.1),
        delta,
        rows,
        thresholds,
    );
    if v.rows.iter().any(|r| r.extra.get("tail_plus") == Some(&json!("unbounded")) || r.extra.get("tail_minus") == Some(&json!("unbounded"))) {
        v.caveats.push("some indices are too small for the tail heuristic".into());
    }
    if z.is_zero() && v.rows.iter().any(|r| r.class == IndexClass::Delta1) {
        v.caveats.push("two-sided bounds over |z| ≤ 1 are sampled at z = ±1, ±i only (a2_min, a2_max)".into());
    }
    Ok(v)
}

fn split(index_set: &IndexSet, rows: &[EvidenceRow], structural: Option<String>) -> DeltaReport {
    let pick = |c| rows.iter().filter(|r| r.class == c).map(|r| r.n).collect();
    DeltaReport {
        description: index_set.describe(),
        index_set: index_set.clone(),
        delta0: pick(IndexClass::Delta0),
        delta1: pick(IndexClass::Delta1),
        structural,
    }
}

fn z_star_big(pair: &SpectralPair, prec: u32) -> Complex {
    match &pair.precise {
        Some(p) => {
            let nn = Complex::with_val(prec, (pair.n * pair.n, 0));
            Complex::with_val(prec, &p.lambda_minus + &p.lambda_plus) / 2u32 - nn
        }
        None => Complex::with_val(prec, (pair.z_star.re, pair.z_star.im)),
    }
}

/// Criterion 2: t_n(z_n^*) with β evaluated at the pair's midpoint shift.
pub fn criterion2_quantity(pair: &SpectralPair, pot: &FourierPotential, caps: (u64, u64), precision: u32) -> Result<f64> {
    check_precision(precision)?;
    if pair.is_double() {
        return Err(Error::Degenerate(format!("pair at n = {} is double", pair.n)));
    }
    let z = z_star_big(pair, precision);
    let bp = beta_in(pot, pair.n, WalkKind::X, &z, caps.0, precision)?;
    let bm = beta_in(pot, pair.n, WalkKind::Y, &z, caps.1, precision)?;
    t_n_big(&bp, &bm)
}

/// Criterion 3: |λ⁺ − μ| / |λ⁺ − λ⁻|.
pub fn criterion3_ratio(pair: &SpectralPair) -> Result<f64> {
    let mu = pair.mu.ok_or_else(|| Error::Config(format!("no Dirichlet value attached at n = {}", pair.n)))?;
    if let Some(p) = &pair.precise {
        if let Some(mu) = &p.mu {
            let prec = p.lambda_plus.prec().0;
            let num = Float::with_val(prec, Complex::with_val(prec, &p.lambda_plus - mu).abs_ref());
            let den = Float::with_val(prec, Complex::with_val(prec, &p.lambda_plus - &p.lambda_minus).abs_ref());
            if den.is_zero() {
                return Err(Error::Degenerate(format!("zero gap at n = {}", pair.n)));
            }
            return Ok((num / den).to_f64());
        }
    }
    let den = (pair.lambda_plus - pair.lambda_minus).norm();
    if den == 0.0 {
        return Err(Error::Degenerate(format!("zero gap at n = {}", pair.n)));
    }
    Ok((pair.lambda_plus - mu).norm() / den)
}

fn pair_at(report: &SpectrumReport, n: u64) -> Result<&SpectralPair> {
    report
        .pair(n)
        .ok_or_else(|| Error::Config(format!("n = {n} is not among the localized pairs (N = {}, n_max = {})", report.n_cut, report.n_max)))
}

fn pair_row(pair: &SpectralPair, value: Result<f64>) -> Result<EvidenceRow> {
    if pair.is_double() {
        return Ok(EvidenceRow::delta0(pair.n).with("gap", json!(pair.gap)));
    }
    let mut row = EvidenceRow::delta1(pair.n, value?)
        .with("gap", json!(pair.gap))
        .with("z_star", json!(C64::from(pair.z_star)));
    if let Some(d) = pair.deviation {
        row = row.with("deviation", json!(d));
    }
    Ok(row)
}

/// Criterion 2 over the given indices of a computed spectrum.
pub fn criterion2_verdict(
    pot: &FourierPotential,
    report: &SpectrumReport,
    ns: &[u64],
    caps: (u64, u64),
    precision: u32,
    thresholds: &Thresholds,
) -> Result<BasisVerdict> {
    let pairs: Vec<&SpectralPair> = ns.iter().map(|&n| pair_at(report, n)).collect::<Result<_>>()?;
    let rows: Vec<EvidenceRow> = pairs
        .par_iter()
        .map(|p| {
            let v = if p.is_double() { Ok(0.0) } else { criterion2_quantity(p, pot, caps, precision) };
            pair_row(p, v)
        })
        .collect::<Result<_>>()?;
    let set = IndexSet::new(Generator::Explicit(ns.to_vec()), Parity::of_bc(report.bc), 1..=u64::MAX);
    let delta = split(&set, &rows, None);
    Ok(BasisVerdict::from_rows(
        Criterion::C2,
        Some(report.bc),
        describe_potential(pot),
        "t_n(z_n^*) at z_n^* = ½(λ⁻ + λ⁺) − n²",
        delta,
        rows,
        thresholds,
    ))
}

/// Criterion 3 over the given indices of a spectrum computed with Dirichlet values.
pub fn criterion3_verdict(
    pot: &FourierPotential,
    report: &SpectrumReport,
    ns: &[u64],
    thresholds: &Thresholds,
) -> Result<BasisVerdict> {
    let rows: Vec<EvidenceRow> = ns
        .iter()
        .map(|&n| {
            let p = pair_at(report, n)?;
            let v = if p.is_double() { Ok(0.0) } else { criterion3_ratio(p) };
            pair_row(p, v)
        })
        .collect::<Result<_>>()?;
    let set = IndexSet::new(Generator::Explicit(ns.to_vec()), Parity::of_bc(report.bc), 1..=u64::MAX);
    let delta = split(&set, &rows, None);
    Ok(BasisVerdict::from_rows(
        Criterion::C3,
        Some(report.bc),
        describe_potential(pot),
        "|λ⁺ − μ| / |λ⁺ − λ⁻| with μ the Dirichlet eigenvalue near n²",
        delta,
        rows,
        thresholds,
    ))
}

/// The three criteria side by side on the same indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Concordance {
    pub c1: BasisVerdict,
    pub c2: BasisVerdict,
    pub c3: BasisVerdict,
    pub spectrum: SpectrumReport,
}

pub fn concordance(
    pot: &FourierPotential,
    bc: BoundaryCondition,
    ns: &[u64],
    cfg: &SpectrumConfig,
    caps: (u64, u64),
    thresholds: &Thresholds,
) -> Result<Concordance> {
    let set = IndexSet::new(Generator::Explicit(ns.to_vec()), Parity::of_bc(bc), 1..=u64::MAX);
    let c1 = criterion1_verdict(pot, &set, &ExactScalar::zero(), caps, thresholds)?;
    let cfg = SpectrumConfig { dirichlet: true, ..cfg.clone() };
    let spec = spectrum(pot, bc, &cfg)?;
    let c2 = criterion2_verdict(pot, &spec, ns, caps, cfg.precision, thresholds)?;
    let c3 = criterion3_verdict(pot, &spec, ns, thresholds)?;
    Ok(Concordance { c1, c2, c3, spectrum: spec })
}

/// |β⁻(0)/β⁺(0)| rows from exact walk sums.
struct RatioRow {
    n: u64,
    m: u64,
    bp: BetaValue,
    bm: BetaValue,
    /// ln |β⁻(0)/β⁺(0)|.
    log_ratio: f64,
}

fn ratio_rows(pot: &FourierPotential, ns: &[(u64, u64)], caps: (u64, u64), precision: u32) -> Result<Vec<RatioRow>> {
    let zero = ExactScalar::zero();
    ns.par_iter()
        .map(|&(m, n)| {
            let bp = beta_plus(pot, n, &zero, caps.0)?;
            let bm = beta_minus(pot, n, &zero, caps.1)?;
            nonzero_or_degenerate(bp.value.is_zero(), "β⁺")?;
            nonzero_or_degenerate(bm.value.is_zero(), "β⁻")?;
            let q = bm.value.norm_sqr() / bp.value.norm_sqr();
            Ok(RatioRow { n, m, log_ratio: half_ln(&q, precision), bp, bm })
        })
        .collect()
}

fn ratio_row_json(r: &RatioRow, bc: BoundaryCondition) -> EvidenceRow {
    EvidenceRow::delta1(r.n, r.log_ratio.exp())
        .with("m", json!(r.m))
        .with("t_n", json!((-r.log_ratio).exp().max(r.log_ratio.exp())))
        .with("log_ratio", json!(r.log_ratio))
        .with("in_class", json!(in_class(bc, r.n)))
        .with("beta_plus", c64_json(&r.bp.value))
        .with("beta_minus", c64_json(&r.bm.value))
        .with("tail_plus", tail_json(&r.bp.tail_estimate))
        .with("tail_minus", tail_json(&r.bm.tail_estimate))
}

fn t_values_in_class(rows: &[EvidenceRow], bc: BoundaryCondition) -> Vec<f64> {
    rows.iter()
        .filter(|r| in_class(bc, r.n))
        .filter_map(|r| r.extra.get("t_n").and_then(Value::as_f64))
        .collect()
}

fn pair_bc(bc: BoundaryCondition) -> Result<()> {
    if bc == BoundaryCondition::Dirichlet {
        Err(Error::Config("the rule concerns per+ and per- root functions".into()))
    } else {
        Ok(())
    }
}

/// R ≠ S: the ratio |β⁻(0)/β⁺(0)| over n = r·s·d·m collapses like
/// C^m m^{−|r−s|m}, so no basis for per+, and for per- when R and S are odd.
pub fn theorem31_report(
    params: &TwoTermParams,
    bc: BoundaryCondition,
    m_range: RangeInclusive<u64>,
    caps: (u64, u64),
    precision: u32,
    thresholds: &Thresholds,
) -> Result<BasisVerdict> {
    check_precision(precision)?;
    pair_bc(bc)?;
    if params.R == params.S {
        return Err(Error::Domain("the collapse rule needs R ≠ S".into()));
    }
    let step = params.r * params.s * params.d;
    let ms: Vec<(u64, u64)> = m_range.clone().filter(|&m| m >= 1).map(|m| (m, step * m)).collect();
    let pot = params.potential();
    let raw = ratio_rows(&pot, &ms, caps, precision)?;
    let k = params.r.abs_diff(params.s) as f64;
    let mut ok = true;
    let mut rows = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let mut row = ratio_row_json(r, bc);
        if i > 0 {
            let dec = raw[i - 1].log_ratio - r.log_ratio;
            let bound = 0.8 * k * (r.m as f64).ln();
            ok &= dec > 0.0 && dec >= bound;
            row = row.with("decrement", json!(dec)).with("decrement_bound", json!(bound));
        }
        rows.push(row);
    }
    let set = IndexSet::new(Generator::RsdMultiples, Parity::Both, step * ms.first().map_or(1, |x| x.0)..=step * ms.last().map_or(1, |x| x.0));
    let delta = split(&set, &rows, None);
    let in_class_t = t_values_in_class(&rows, bc);
    let mut v = BasisVerdict::from_rows(
        Criterion::C1,
        Some(bc),
        describe_params(params),
        "|β⁻(0)/β⁺(0)| from exact walk sums at n = r·s·d·m",
        delta,
        rows,
        thresholds,
    );
    v.numerical_conclusion = thresholds.conclude(&in_class_t);
    let odd_multiples = step % 2 == 1;
    let (conclusion, rule) = match bc {
        BoundaryCondition::PerPlus => (
            Conclusion::NoBasis,
            format!("R ≠ S: the ratio collapses along the even multiples of r·s·d = {step}, so there is no basis for per+"),
        ),
        _ if odd_multiples => (
            Conclusion::NoBasis,
            format!("R and S are odd, so r·s·d = {step} is odd and its odd multiples carry the collapse: no basis for per-"),
        ),
        _ => {
            v.caveats.push(format!(
                "r·s·d = {step} is even, so no index of the collapse set is odd; the rule does not cover per-"
            ));
            (Conclusion::Inconclusive, format!("R ≠ S with r·s·d = {step} even: the rule is silent for per-"))
        }
    };
    let monotone = v.rows.windows(2).all(|w| w[1].value < w[0].value);
    Ok(v.decide_by_rule(conclusion, rule, Some(ok && monotone)))
}

/// R = 1, S = s ≥ 3: along n = s·m − 1 the ratio |β⁻(0)/β⁺(0)| decays like
/// C^m m^{2(1−s)m}, so there is no basis for per-.
pub fn theorem5_report(
    a: &ExactScalar,
    b: &ExactScalar,
    s: u64,
    m_range: RangeInclusive<u64>,
    caps: (u64, u64),
    precision: u32,
    thresholds: &Thresholds,
) -> Result<BasisVerdict> {
    check_precision(precision)?;
    if s < 3 {
        return Err(Error::Domain(format!("the super-exponential rule needs s ≥ 3, got s = {s}")));
    }
    let params = TwoTermParams::new(a.clone(), b.clone(), 1, s)?;
    let bc = BoundaryCondition::PerMinus;
    let ms: Vec<(u64, u64)> = m_range.clone().filter(|&m| m >= 1).map(|m| (m, s * m - 1)).collect();
    let pot = params.potential();
    let raw = ratio_rows(&pot, &ms, caps, precision)?;
    let mut ok = true;
    let mut rows = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let mf = r.m as f64;
        // ln ratio / m + 2(s − 1) ln m stays bounded when the decay law holds.
        let normalized = r.log_ratio / mf + 2.0 * (s as f64 - 1.0) * mf.ln();
        let mut row = ratio_row_json(r, bc).with("normalized_log", json!(normalized));
        if i > 0 {
            let factor = (raw[i - 1].log_ratio - r.log_ratio).exp();
            let bound = mf * mf;
            ok &= factor >= bound;
            row = row.with("factor", json!(factor)).with("factor_bound", json!(bound));
        }
        rows.push(row);
    }
    let set = IndexSet::new(Generator::SmMinusOne, Parity::Both, ms.first().map_or(1, |x| x.1)..=ms.last().map_or(1, |x| x.1));
    let delta = split(&set, &rows, None);
    let in_class_t = t_values_in_class(&rows, bc);
    let mut v = BasisVerdict::from_rows(
        Criterion::C1,
        Some(bc),
        describe_params(&params),
        "|β⁻(0)/β⁺(0)| from exact walk sums at n = s·m − 1",
        delta,
        rows,
        thresholds,
    );
    v.numerical_conclusion = thresholds.conclude(&in_class_t);
    let parity_note = if s.is_multiple_of(2) {
        format!("s = {s} is even, so every n = s·m − 1 is odd")
    } else {
        format!("s = {s} is odd, so n = s·m − 1 is odd exactly for even m")
    };
    v.caveats.push(parity_note.clone());
    let rule = format!("R = 1, S = s = {s} ≥ 3: the ratio decays super-exponentially along n = s·m − 1 ({parity_note}), so there is no basis for per-");
    Ok(v.decide_by_rule(Conclusion::NoBasis, rule, Some(ok)))
}

/// R = S: per- with R even contains a basis; otherwise a basis exists iff |a| = |b|.
#[allow(non_snake_case)]
pub fn prop20_verdict(
    a: &ExactScalar,
    b: &ExactScalar,
    R: u64,
    bc: BoundaryCondition,
    n_max: u64,
    caps: (u64, u64),
    thresholds: &Thresholds,
) -> Result<BasisVerdict> {
    pair_bc(bc)?;
    let params = TwoTermParams::new(a.clone(), b.clone(), R, R)?;
    let pot = params.potential();
    let parity = Parity::of_bc(bc);
    let set = IndexSet::new(Generator::Explicit((1..=n_max).collect()), parity, 1..=n_max);
    let mut v = criterion1_verdict(&pot, &set, &ExactScalar::zero(), caps, thresholds)?;
    v.bc = Some(bc);
    // Leading order: t_n ≈ max(|a/b|, |b/a|)^{n/R} on R-multiples.
    let q = params.a.norm_sqr() / params.b.norm_sqr();
    let base = sqrt_f64(&(if q >= 1 { q } else { q.recip() }));
    let mut within = true;
    for row in v.rows.iter_mut().filter(|r| r.class == IndexClass::Delta1) {
        let predicted = base.powf(row.n as f64 / R as f64);
        let got = row.value.unwrap_or(f64::NAN);
        let ok = got <= 2.0 * predicted && got >= predicted / 2.0;
        within &= ok;
        row.extra.insert("predicted".into(), json!(predicted));
        row.extra.insert("within_factor_2".into(), json!(ok));
    }
    let structural_ok = v.rows.iter().all(|r| (r.class == IndexClass::Delta0) == (r.n % R != 0));
    let (conclusion, rule) = if R.is_multiple_of(2) && bc == BoundaryCondition::PerMinus {
        (
            Conclusion::ContainsBasis,
            format!("R = {R} is even: every odd n has n ≢ 0 mod R, so β⁺ = β⁻ ≡ 0 and all per- pairs are double"),
        )
    } else if params.moduli_equal() {
        (Conclusion::ContainsBasis, "|a|² = |b|² exactly, so t_n stays bounded on the R-multiples".to_string())
    } else {
        (
            Conclusion::NoBasis,
            format!("|a|² = {} ≠ |b|² = {}, so t_n grows geometrically on the R-multiples", params.a.norm_sqr(), params.b.norm_sqr()),
        )
    };
    Ok(v.decide_by_rule(conclusion, rule, Some(within && structural_ok)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::two_term_int;

    #[test]
    fn t_n_basics() {
        let c = Complex64::new(0.3, -0.2);
        assert_eq!(t_n(c, c).unwrap(), 1.0);
        assert_eq!(t_n(Complex64::new(1.0, 0.0), Complex64::new(4.0, 0.0)).unwrap(), 4.0);
        assert!(matches!(t_n(Complex64::new(0.0, 0.0), c), Err(Error::Degenerate(_))));
        assert_eq!(t_n_exact(&ExactScalar::from_int(3), &ExactScalar::from_int(-12)).unwrap(), 4.0);
    }

    #[test]
    fn threshold_logic() {
        let t = Thresholds::default();
        assert_eq!(t.conclude(&[1.0, 1.5, 1.2]), Conclusion::ContainsBasis);
        assert_eq!(t.conclude(&[10.0, 100.0, 2000.0]), Conclusion::NoBasis);
        assert_eq!(t.conclude(&[10.0, 3000.0, 2000.0]), Conclusion::Inconclusive);
        assert_eq!(t.conclude(&[]), Conclusion::Inconclusive);
        assert_eq!(t.conclude(&[2.4, 4.3, 8.1, 15.8]), Conclusion::Inconclusive);
        assert_eq!(t.conclude(&[0.5, 0.8, 0.9]), Conclusion::ContainsBasis);
    }

    #[test]
    fn index_sets() {
        let (_, p) = two_term_int(1, 1, 2, 3).unwrap();
        let s = IndexSet::new(Generator::RsdMultiples, Parity::Even, 1..=30);
        assert_eq!(s.indices(Some(&p)).unwrap(), vec![6, 12, 18, 24, 30]);
        let (_, p) = two_term_int(1, 1, 1, 3).unwrap();
        let s = IndexSet::new(Generator::SmMinusOne, Parity::Odd, 1..=20);
        assert_eq!(s.indices(Some(&p)).unwrap(), vec![5, 11, 17]);
        let (_, p) = two_term_int(1, 1, 5, 5).unwrap();
        let s = IndexSet::new(Generator::ModRNonzero, Parity::Both, 1..=7);
        assert_eq!(s.indices(Some(&p)).unwrap(), vec![1, 2, 3, 4, 6, 7]);
        assert!(IndexSet::new(Generator::RMultiples, Parity::Both, 1..=5).indices(None).is_err());
        assert_eq!("list:3, 5,9".parse::<Generator>().unwrap(), Generator::Explicit(vec![3, 5, 9]));
    }

    #[test]
    fn criterion3_arithmetic() {
        let mut p = SpectralPair {
            n: 3,
            lambda_minus: Complex64::new(9.0, 0.0),
            lambda_plus: Complex64::new(9.1, 0.0),
            mu: Some(Complex64::new(9.05, 0.0)),
            gap: 0.1,
            deviation: None,
            z_star: Complex64::new(0.05, 0.0),
            multiplicity: crate::spectra::Multiplicity::Simple,
            refined: false,
            precise: None,
        };
        assert!((criterion3_ratio(&p).unwrap() - 0.5).abs() < 1e-12);
        p.mu = Some(p.lambda_plus);
        assert_eq!(criterion3_ratio(&p).unwrap(), 0.0);
        p.lambda_minus = p.lambda_plus;
        assert!(criterion3_ratio(&p).is_err());
    }

    #[test]
    fn theorem5_rejects_s2() {
        let one = ExactScalar::one();
        assert!(matches!(
            theorem5_report(&one, &one, 2, 2..=4, (3, 2), 128, &Thresholds::default()),
            Err(Error::Domain(_))
        ));
    }
}
