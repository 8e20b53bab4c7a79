use hillbasis::criteria::{
    concordance, criterion1_verdict, criterion2_verdict, criterion3_verdict, prop20_verdict, theorem31_report,
    theorem5_report, BasisVerdict, Concordance, Generator, IndexSet, Parity,
};
use hillbasis::potential::TwoTermParams;
use hillbasis::spectra::{spectrum, BoundaryCondition, SpectrumConfig};

use crate::args::{CriterionArg, Format, Preset};
use crate::commands::spectrum::config;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{self, opt_f};

const DEFAULT_RANGE: (u64, u64) = (1, 12);

fn two_term(settings: &Settings) -> CliResult<TwoTermParams> {
    settings.potential.as_two_term().ok_or_else(|| CliError::usage("this verdict needs a two-term potential"))
}

fn pair_bc(settings: &Settings) -> CliResult<()> {
    if settings.bc == BoundaryCondition::Dirichlet {
        return Err(CliError::usage("verdicts need --bc per+ or per-"));
    }
    Ok(())
}

fn index_set(settings: &Settings) -> IndexSet {
    let (lo, hi) = settings.range.unwrap_or(DEFAULT_RANGE);
    let generator = settings.delta.clone().unwrap_or_else(|| Generator::Explicit((lo..=hi).collect()));
    IndexSet::new(generator, Parity::of_bc(settings.bc), lo..=hi)
}

/// Spectrum run wide enough to cover `ns`.
fn spectrum_for(settings: &Settings, ns: &[u64], dirichlet: bool) -> CliResult<SpectrumConfig> {
    let top = ns.iter().copied().max().unwrap_or(1);
    if top > settings.k as u64 {
        return Err(CliError::usage(format!("index {top} exceeds the cutoff K = {}", settings.k)));
    }
    let mut cfg = config(settings, dirichlet);
    cfg.n_max = Some(top.max(settings.k as u64 / 2));
    Ok(cfg)
}

fn criterion(settings: &Settings) -> CliResult<BasisVerdict> {
    pair_bc(settings)?;
    let set = index_set(settings);
    let pot = &settings.potential;
    let th = &settings.thresholds;
    let lib = CliError::from_criteria;
    match settings.criterion {
        CriterionArg::C1 => criterion1_verdict(pot, &set, &settings.z, settings.caps, th).map_err(lib),
        c => {
            let ns = set.indices(pot.as_two_term().as_ref()).map_err(lib)?;
            let cfg = spectrum_for(settings, &ns, c == CriterionArg::C3)?;
            let report = spectrum(pot, settings.bc, &cfg).map_err(lib)?;
            if c == CriterionArg::C2 {
                criterion2_verdict(pot, &report, &ns, settings.caps, settings.precision, th).map_err(lib)
            } else {
                criterion3_verdict(pot, &report, &ns, th).map_err(lib)
            }
        }
    }
}

enum Outcome {
    Verdict(Box<BasisVerdict>),
    Concordance(Box<Concordance>),
}

fn preset(settings: &Settings, preset: Preset) -> CliResult<Outcome> {
    pair_bc(settings)?;
    let p = two_term(settings)?;
    let (lo, hi) = settings.range.unwrap_or(DEFAULT_RANGE);
    let th = &settings.thresholds;
    let lib = CliError::from_criteria;
    let v = match preset {
        Preset::Thm31 => theorem31_report(&p, settings.bc, lo..=hi, settings.caps, settings.precision, th),
        Preset::Thm5 => {
            if p.R != 1 {
                return Err(CliError::usage(format!("thm5 needs R = 1, got R = {}", p.R)));
            }
            theorem5_report(&p.a, &p.b, p.S, lo..=hi, settings.caps, settings.precision, th)
        }
        Preset::Prop20 => {
            if p.R != p.S {
                return Err(CliError::usage(format!("prop20 needs R = S, got R = {}, S = {}", p.R, p.S)));
            }
            prop20_verdict(&p.a, &p.b, p.R, settings.bc, hi, settings.caps, th)
        }
        Preset::CritCompare => {
            let ns = index_set(settings).indices(Some(&p)).map_err(lib)?;
            let cfg = spectrum_for(settings, &ns, true)?;
            let c = concordance(&settings.potential, settings.bc, &ns, &cfg, settings.caps, th).map_err(lib)?;
            return Ok(Outcome::Concordance(Box::new(c)));
        }
    };
    Ok(Outcome::Verdict(Box::new(v.map_err(lib)?)))
}

fn verdict_csv(v: &BasisVerdict) -> Vec<Vec<String>> {
    v.rows
        .iter()
        .map(|r| {
            vec![
                format!("{:?}", v.criterion),
                r.n.to_string(),
                serde_json::to_value(r.class).map(|c| c.as_str().unwrap_or_default().to_string()).unwrap_or_default(),
                opt_f(r.value),
                v.conclusion.to_string(),
            ]
        })
        .collect()
}

const CSV_HEADER: [&str; 5] = ["criterion", "n", "class", "value", "conclusion"];

pub fn run(settings: &Settings) -> CliResult<String> {
    let outcome = match settings.preset {
        Some(p) => preset(settings, p)?,
        None => Outcome::Verdict(Box::new(criterion(settings)?)),
    };
    match (outcome, settings.format) {
        (Outcome::Verdict(v), Format::Json) => output::json(&v),
        (Outcome::Concordance(c), Format::Json) => output::json(&c),
        (Outcome::Verdict(v), Format::Csv | Format::Text) => output::csv(&CSV_HEADER, &verdict_csv(&v)),
        (Outcome::Concordance(c), Format::Csv | Format::Text) => {
            let rows: Vec<_> = [&c.c1, &c.c2, &c.c3].into_iter().flat_map(verdict_csv).collect();
            output::csv(&CSV_HEADER, &rows)
        }
    }
}
