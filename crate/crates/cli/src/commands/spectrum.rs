use hillbasis::report::C64;
use hillbasis::spectra::dirichlet::{galerkin_in_disc, polish};
use hillbasis::spectra::{spectrum, BoundaryCondition, SpectralPair, SpectrumConfig};
use hillbasis::Error;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::Format;
use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{self, f, opt_f};

const PAIR_HEADER: [&str; 12] = [
    "n",
    "lambda_minus_re",
    "lambda_minus_im",
    "lambda_plus_re",
    "lambda_plus_im",
    "gap",
    "mu_re",
    "mu_im",
    "deviation",
    "z_star_re",
    "z_star_im",
    "flags",
];

fn flags(p: &SpectralPair) -> String {
    let mut v = Vec::new();
    if p.is_double() {
        v.push("double");
    }
    if p.refined {
        v.push("refined");
    }
    v.join("|")
}

fn pair_record(p: &SpectralPair) -> Vec<String> {
    vec![
        p.n.to_string(),
        f(p.lambda_minus.re),
        f(p.lambda_minus.im),
        f(p.lambda_plus.re),
        f(p.lambda_plus.im),
        f(p.gap),
        opt_f(p.mu.map(|m| m.re)),
        opt_f(p.mu.map(|m| m.im)),
        opt_f(p.deviation),
        f(p.z_star.re),
        f(p.z_star.im),
        flags(p),
    ]
}

/// One Dirichlet eigenvalue per disc.
#[derive(Debug, Serialize)]
struct DirichletRow {
    n: u64,
    mu: C64,
    refined: bool,
}

#[derive(Debug, Serialize)]
struct DirichletReport {
    bc: BoundaryCondition,
    k: usize,
    n_cut: u64,
    n_cut_empirical: bool,
    n_max: u64,
    eigenvalues: Vec<DirichletRow>,
}

fn dirichlet(settings: &Settings) -> CliResult<String> {
    let pot = &settings.potential;
    let k = settings.k;
    let n_max = k as u64 / 2;
    let counts: Vec<Vec<_>> =
        (1..=n_max).map(|n| galerkin_in_disc(pot, k, n)).collect::<Result<_, _>>().map_err(CliError::from_lib)?;
    let working = (1..=n_max).rev().find(|&n| counts[n as usize - 1].len() != 1).unwrap_or(0);
    let (n_cut, empirical) = match settings.n_cut {
        Some(n) => (n, false),
        None => (working, true),
    };
    let rows: Vec<DirichletRow> = ((n_cut + 1)..=n_max)
        .into_par_iter()
        .map(|n| {
            let inside = &counts[n as usize - 1];
            if inside.len() != 1 {
                return Err(CliError::from_lib(Error::Localization { n, count: inside.len(), expected: 1 }));
            }
            let mu = if settings.refine {
                let m = polish(pot, inside[0], settings.precision).map_err(CliError::from_lib)?;
                num_complex::Complex64::new(m.real().to_f64(), m.imag().to_f64())
            } else {
                inside[0]
            };
            Ok(DirichletRow { n, mu: mu.into(), refined: settings.refine })
        })
        .collect::<CliResult<_>>()?;
    let report = DirichletReport {
        bc: BoundaryCondition::Dirichlet,
        k,
        n_cut,
        n_cut_empirical: empirical,
        n_max,
        eigenvalues: rows,
    };
    match settings.format {
        Format::Json => output::json(&report),
        Format::Csv | Format::Text => output::csv(
            &["n", "mu_re", "mu_im", "flags"],
            &report
                .eigenvalues
                .iter()
                .map(|r| {
                    vec![r.n.to_string(), f(r.mu.re), f(r.mu.im), if r.refined { "refined" } else { "" }.to_string()]
                })
                .collect::<Vec<_>>(),
        ),
    }
}

pub fn config(settings: &Settings, dirichlet: bool) -> SpectrumConfig {
    SpectrumConfig {
        k: settings.k,
        n_cut: settings.n_cut,
        precision: settings.precision,
        refine: settings.refine,
        dirichlet,
        ..SpectrumConfig::default()
    }
}

pub fn run(settings: &Settings) -> CliResult<String> {
    if settings.bc == BoundaryCondition::Dirichlet {
        return dirichlet(settings);
    }
    let report = spectrum(&settings.potential, settings.bc, &config(settings, settings.dirichlet))
        .map_err(CliError::from_lib)?;
    match settings.format {
        Format::Json => output::json(&report),
        Format::Csv | Format::Text => output::csv(&PAIR_HEADER, &report.pairs().iter().map(pair_record).collect::<Vec<_>>()),
    }
}
