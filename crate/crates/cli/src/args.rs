use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hillbasis", version, about = "Walk functionals, Galerkin spectra and basis verdicts for Hill operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate β⁺, β⁻ and α over an index set.
    Beta,
    /// Periodic or antiperiodic pairs, or Dirichlet eigenvalues.
    Spectrum,
    /// Basis verdict from one criterion or a preset.
    Verdict,
    /// Identity and cross-path checks; exit 1 on any failure.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    /// Plain PASS/FAIL lines; `verify` only.
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
pub enum Preset {
    #[value(name = "thm31")]
    #[serde(rename = "thm31")]
    Thm31,
    #[value(name = "thm5")]
    #[serde(rename = "thm5")]
    Thm5,
    #[value(name = "prop20")]
    #[serde(rename = "prop20")]
    Prop20,
    #[value(name = "crit-compare")]
    #[serde(rename = "crit-compare")]
    CritCompare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionArg {
    C1,
    C2,
    C3,
}

/// Every flag is global so it can follow the subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON potential literal, or the two-term shorthand "a;b;R;S" (complex
    /// coefficients as "re,im").
    #[arg(long, global = true)]
    pub potential: Option<String>,
    /// per+, per- or dirichlet.
    #[arg(long, global = true)]
    pub bc: Option<String>,
    /// Galerkin cutoff.
    #[arg(long = "K", global = true)]
    pub k: Option<usize>,
    /// Localization threshold; empirical when absent.
    #[arg(long = "N", global = true)]
    pub n: Option<u64>,
    /// Shell caps "p,q" for β⁺ and β⁻.
    #[arg(long, global = true)]
    pub caps: Option<String>,
    /// Step cap for α and for potentials with more than two terms.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Working precision in bits.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Index set: rsd-multiples, sm-minus-1, mod-R-nonzero, R-multiples or list:n1,n2,...
    #[arg(long, global = true)]
    pub delta: Option<String>,
    /// Inclusive range "lo..hi" (indices n, or m for the thm31/thm5 presets).
    #[arg(long, global = true)]
    pub range: Option<String>,
    /// Spectral parameter z as "re" or "re,im".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub criterion: Option<CriterionArg>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Attach Dirichlet eigenvalues to spectrum pairs.
    #[arg(long, global = true)]
    pub dirichlet: bool,
    /// Skip high-precision refinement of pairs.
    #[arg(long, global = true)]
    pub no_refine: bool,
    /// no-basis needs the last monitored value above this.
    #[arg(long, global = true)]
    pub divergence: Option<f64>,
    /// contains-basis needs every monitored value at or below this.
    #[arg(long, global = true)]
    pub cap: Option<f64>,
    /// Length of the increasing tail required for no-basis.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Overall growth of that tail that withholds contains-basis.
    #[arg(long, global = true)]
    pub growth: Option<f64>,
    /// Rational added to the coefficient a in the enumerated side of the
    /// shell-0 checks of `verify`.
    #[arg(long, global = true, hide = true)]
    pub perturb: Option<String>,
}
