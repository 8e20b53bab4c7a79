use std::collections::BTreeMap;

use hillbasis::beta::{
    beta_minus, beta_minus_leading, beta_plus, beta_plus_leading, default_w_cap, functional_by_steps, h_star_minus,
    h_star_plus, BetaValue, TailEstimate, H_minus, H_plus,
};
use hillbasis::numerics::ExactScalar;
use hillbasis::potential::TwoTermParams;
use hillbasis::report::C64;
use hillbasis::walks::WalkKind;
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::args::Format;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{self, f};

const DEFAULT_STEPS: usize = 6;

#[derive(Debug, Serialize)]
struct Functional {
    exact: ExactScalar,
    value: C64,
    tail_estimate: TailEstimate,
    exact_through: u64,
}

impl From<&BetaValue> for Functional {
    fn from(v: &BetaValue) -> Self {
        Self {
            exact: v.value.clone(),
            value: v.value.to_c64().into(),
            tail_estimate: v.tail_estimate,
            exact_through: v.exact_through_shell,
        }
    }
}

/// A closed form for the first shell or the leading asymptotics.
#[derive(Debug, Serialize)]
struct Closed {
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<ExactScalar>,
    value: C64,
    /// Whether the exact form equals the enumerated shell-0 sum.
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_shell0: Option<bool>,
}

#[derive(Debug, Serialize)]
struct Row {
    n: u64,
    z: ExactScalar,
    beta_plus: Functional,
    beta_minus: Functional,
    alpha: Functional,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    closed_forms: BTreeMap<&'static str, Closed>,
}

fn exact_closed(exact: ExactScalar, shell0: Option<&ExactScalar>) -> Closed {
    Closed { value: exact.to_c64().into(), matches_shell0: shell0.map(|s| *s == exact), exact: Some(exact) }
}

fn closed_forms(
    p: &TwoTermParams,
    n: u64,
    plus: &BetaValue,
    minus: &BetaValue,
    precision: u32,
) -> CliResult<BTreeMap<&'static str, Closed>> {
    let mut out = BTreeMap::new();
    let at_zero = plus.z.is_zero();
    let s0 = |v: &BetaValue| if at_zero { v.shell_sums.first().cloned() } else { None };
    let (sp, sm) = (s0(plus), s0(minus));
    let lib = CliError::from_lib;
    let base = p.r * p.s * p.d;
    if n.is_multiple_of(base) {
        let m = n / base;
        out.insert("shell0_plus", exact_closed(h_star_plus(p, m).map_err(lib)?, sp.as_ref()));
        out.insert("shell0_minus", exact_closed(h_star_minus(p, m).map_err(lib)?, sm.as_ref()));
    }
    if p.R == 1 {
        if p.s >= 3 && (n + 1).is_multiple_of(p.s) {
            let m = (n + 1) / p.s;
            let h = &H_plus(p.s, m).map_err(lib)? - &H_minus(p.s, m).map_err(lib)?;
            let exact = &(&p.a * &p.b.pow(m as u32)) * &h;
            out.insert("shell0_plus", exact_closed(exact, sp.as_ref()));
            let f = Integer::from(Integer::factorial((n - 1) as u32));
            let den = Rational::from(Integer::from(Integer::u_pow_u(4, (n - 1) as u32))) * Rational::from(&f * &f);
            out.insert("shell0_minus", exact_closed(p.a.pow(n as u32).scale(&den.recip()), sm.as_ref()));
            let lead = beta_plus_leading(p, m, precision).map_err(lib)?;
            out.insert("leading_plus", Closed { exact: None, value: lead.to_c64().into(), matches_shell0: None });
        }
        let lead = beta_minus_leading(&p.a, n, precision).map_err(lib)?;
        out.insert("leading_minus", Closed { exact: None, value: lead.to_c64().into(), matches_shell0: None });
    }
    Ok(out)
}

fn row(settings: &Settings, n: u64) -> CliResult<Row> {
    let pot = &settings.potential;
    let z = &settings.z;
    let lib = CliError::from_lib;
    let params = pot.as_two_term();
    let (plus, minus) = match &params {
        Some(_) => (
            beta_plus(pot, n, z, settings.caps.0).map_err(lib)?,
            beta_minus(pot, n, z, settings.caps.1).map_err(lib)?,
        ),
        None => {
            let cap = settings.steps.unwrap_or(DEFAULT_STEPS);
            (
                functional_by_steps(pot, n, WalkKind::X, z, cap).map_err(lib)?,
                functional_by_steps(pot, n, WalkKind::Y, z, cap).map_err(lib)?,
            )
        }
    };
    let w_cap = settings.steps.unwrap_or_else(|| params.as_ref().map_or(DEFAULT_STEPS, default_w_cap));
    let alpha = functional_by_steps(pot, n, WalkKind::W, z, w_cap).map_err(lib)?;
    let closed = match &params {
        Some(p) => closed_forms(p, n, &plus, &minus, settings.precision)?,
        None => BTreeMap::new(),
    };
    Ok(Row {
        n,
        z: z.clone(),
        beta_plus: (&plus).into(),
        beta_minus: (&minus).into(),
        alpha: (&alpha).into(),
        closed_forms: closed,
    })
}

const HEADER: [&str; 20] = [
    "n",
    "z_re",
    "z_im",
    "beta_plus_re",
    "beta_plus_im",
    "beta_plus_f64_re",
    "beta_plus_f64_im",
    "tail_plus",
    "beta_minus_re",
    "beta_minus_im",
    "beta_minus_f64_re",
    "beta_minus_f64_im",
    "tail_minus",
    "alpha_re",
    "alpha_im",
    "alpha_f64_re",
    "alpha_f64_im",
    "shell0_plus_matches",
    "shell0_minus_matches",
    "leading_plus_f64_re",
];

fn csv_record(r: &Row) -> Vec<String> {
    let mut v = vec![r.n.to_string(), r.z.re().to_string(), r.z.im().to_string()];
    for x in [&r.beta_plus, &r.beta_minus, &r.alpha] {
        v.extend([x.exact.re().to_string(), x.exact.im().to_string(), f(x.value.re), f(x.value.im)]);
        if !std::ptr::eq(x, &r.alpha) {
            v.push(f(x.tail_estimate.as_f64()));
        }
    }
    let flag = |k: &str| {
        r.closed_forms.get(k).and_then(|c| c.matches_shell0).map(|b| b.to_string()).unwrap_or_default()
    };
    v.push(flag("shell0_plus"));
    v.push(flag("shell0_minus"));
    v.push(r.closed_forms.get("leading_plus").map(|c| f(c.value.re)).unwrap_or_default());
    v
}

pub fn run(settings: &Settings) -> CliResult<String> {
    let ns = settings.indices((1, 12))?;
    let rows: Vec<Row> = ns.par_iter().map(|&n| row(settings, n)).collect::<CliResult<_>>()?;
    match settings.format {
        Format::Json => output::json(&rows),
        Format::Csv | Format::Text => output::csv(&HEADER, &rows.iter().map(csv_record).collect::<Vec<_>>()),
    }
}
