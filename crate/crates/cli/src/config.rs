//! Flag, config-file and preset merging.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use hillbasis::criteria::{Generator, Thresholds};
use hillbasis::numerics::{check_precision, parse_rational, ExactScalar, DEFAULT_PRECISION};
use hillbasis::potential::{two_term, FourierPotential, PotentialSpec};
use hillbasis::spectra::BoundaryCondition;
use rug::Rational;
use serde::Deserialize;
use serde_json::Value;

use crate::args::{Command, CriterionArg, Flags, Format, Preset};
use crate::error::{CliError, CliResult};

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub potential: Option<Value>,
    pub bc: Option<String>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    pub caps: Option<Value>,
    pub steps: Option<usize>,
    pub precision: Option<u32>,
    pub delta: Option<String>,
    pub range: Option<String>,
    pub z: Option<String>,
    pub criterion: Option<CriterionArg>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub preset: Option<Preset>,
    pub dirichlet: Option<bool>,
    pub refine: Option<bool>,
    pub thresholds: Option<Thresholds>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(e, &format!("reading {}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
    }
}

/// Everything a command needs, after merging.
#[derive(Debug, Clone)]
pub struct Settings {
    pub command: Command,
    pub potential: FourierPotential,
    /// The potential as given, for reports.
    pub potential_text: String,
    pub bc: BoundaryCondition,
    pub k: usize,
    pub n_cut: Option<u64>,
    pub caps: (u64, u64),
    pub steps: Option<usize>,
    pub precision: u32,
    pub delta: Option<Generator>,
    pub range: Option<(u64, u64)>,
    pub z: ExactScalar,
    pub criterion: CriterionArg,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub preset: Option<Preset>,
    pub dirichlet: bool,
    pub refine: bool,
    pub thresholds: Thresholds,
    pub perturb: Option<Rational>,
}

struct PresetDefaults {
    potential: &'static str,
    bc: &'static str,
    range: &'static str,
    delta: Option<&'static str>,
}

fn preset_defaults(p: Preset) -> PresetDefaults {
    match p {
        Preset::Thm31 => PresetDefaults { potential: "1;1;1;3", bc: "per+", range: "1..6", delta: None },
        Preset::Thm5 => PresetDefaults { potential: "1;1;1;3", bc: "per-", range: "2..7", delta: None },
        Preset::Prop20 => PresetDefaults { potential: "1;0,1;2;2", bc: "per-", range: "1..12", delta: None },
        Preset::CritCompare => {
            PresetDefaults { potential: "1;2;1;1", bc: "per+", range: "1..12", delta: Some("list:6,8,10,12") }
        }
    }
}

/// Two-term shorthand "a;b;R;S" or a JSON literal.
pub fn parse_potential(text: &str) -> CliResult<FourierPotential> {
    let t = text.trim();
    if t.starts_with('{') {
        return PotentialSpec::parse(t).and_then(|s| s.build()).map_err(CliError::from_lib);
    }
    let parts: Vec<&str> = t.split(';').map(str::trim).collect();
    let [a, b, r, s] = parts.as_slice() else {
        return Err(CliError::usage(format!("potential {t:?}: expected a JSON literal or \"a;b;R;S\"")));
    };
    let a = ExactScalar::from_str(a).map_err(CliError::from_lib)?;
    let b = ExactScalar::from_str(b).map_err(CliError::from_lib)?;
    let r = r.parse::<u64>().map_err(|e| CliError::usage(format!("R = {r:?}: {e}")))?;
    let s = s.parse::<u64>().map_err(|e| CliError::usage(format!("S = {s:?}: {e}")))?;
    two_term(a, b, r, s).map(|(p, _)| p).map_err(CliError::from_lib)
}

pub fn parse_caps(text: &str) -> CliResult<(u64, u64)> {
    let bad = || CliError::usage(format!("caps {text:?}: expected \"p,q\" with nonnegative integers"));
    let (p, q) = text.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

/// "lo..hi" or "lo..=hi", both ends inclusive.
pub fn parse_range(text: &str) -> CliResult<(u64, u64)> {
    let bad = || CliError::usage(format!("range {text:?}: expected \"lo..hi\""));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(CliError::usage(format!("range {text:?} is empty")));
    }
    Ok((lo, hi))
}

fn caps_from_value(v: &Value) -> CliResult<(u64, u64)> {
    match v {
        Value::String(s) => parse_caps(s),
        Value::Array(xs) => match xs.as_slice() {
            [p, q] => match (p.as_u64(), q.as_u64()) {
                (Some(p), Some(q)) => Ok((p, q)),
                _ => Err(CliError::usage("caps must be two nonnegative integers")),
            },
            _ => Err(CliError::usage("caps must have two entries")),
        },
        _ => Err(CliError::usage("caps must be \"p,q\" or [p, q]")),
    }
}

fn potential_from_value(v: &Value) -> CliResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Object(_) => Ok(v.to_string()),
        _ => Err(CliError::usage("potential must be a string or a JSON object")),
    }
}

impl Settings {
    pub fn resolve(command: Command, flags: &Flags) -> CliResult<Self> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let preset = flags.preset.or(file.preset);
        let pd = preset.map(preset_defaults);

        let potential_text = match (&flags.potential, &file.potential) {
            (Some(p), _) => p.clone(),
            (None, Some(v)) => potential_from_value(v)?,
            (None, None) => match &pd {
                Some(d) => d.potential.to_string(),
                None if command == Command::Verify => "1;1;1;1".to_string(),
                None => return Err(CliError::usage("--potential is required")),
            },
        };
        let potential = parse_potential(&potential_text)?;

        let bc_text = flags.bc.clone().or(file.bc).or(pd.as_ref().map(|d| d.bc.to_string()));
        let bc = match bc_text {
            Some(t) => BoundaryCondition::from_str(&t).map_err(CliError::from_lib)?,
            None => BoundaryCondition::PerPlus,
        };

        let k = flags.k.or(file.k).unwrap_or(64);
        if k == 0 {
            return Err(CliError::usage("K must be positive"));
        }
        let caps = match (&flags.caps, &file.caps) {
            (Some(c), _) => parse_caps(c)?,
            (None, Some(v)) => caps_from_value(v)?,
            (None, None) => (hillbasis::beta::DEFAULT_X_CAP, hillbasis::beta::DEFAULT_Y_CAP),
        };
        let steps = flags.steps.or(file.steps);
        if steps == Some(0) {
            return Err(CliError::usage("steps must be positive"));
        }
        let precision = flags.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION);
        check_precision(precision).map_err(CliError::from_lib)?;

        let delta_text = flags.delta.clone().or(file.delta).or(pd.as_ref().and_then(|d| d.delta.map(str::to_string)));
        let delta = delta_text.map(|t| Generator::from_str(&t).map_err(CliError::from_lib)).transpose()?;
        let range_text = flags.range.clone().or(file.range).or(pd.as_ref().map(|d| d.range.to_string()));
        let range = range_text.map(|t| parse_range(&t)).transpose()?;
        let z = match flags.z.clone().or(file.z) {
            Some(t) => ExactScalar::from_str(&t).map_err(CliError::from_lib)?,
            None => ExactScalar::zero(),
        };

        let mut thresholds = file.thresholds.unwrap_or_default();
        if let Some(v) = flags.divergence {
            thresholds.divergence = v;
        }
        if let Some(v) = flags.cap {
            thresholds.cap = v;
        }
        if let Some(v) = flags.window {
            thresholds.monotone_window = v;
        }
        if let Some(v) = flags.growth {
            thresholds.growth_factor = v;
        }
        if !(thresholds.divergence > 0.0 && thresholds.cap > 0.0 && thresholds.growth_factor > 0.0)
            || thresholds.monotone_window == 0
        {
            return Err(CliError::usage("thresholds must be positive"));
        }

        let out = flags.out.clone().or(file.out);
        if let Some(p) = &out {
            let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if !parent.is_dir() {
                return Err(CliError::usage(format!("output directory {} does not exist", parent.display())));
            }
        }
        let format = flags.format.or(file.format).unwrap_or(match command {
            Command::Beta | Command::Spectrum => Format::Csv,
            Command::Verdict => Format::Json,
            Command::Verify => Format::Text,
        });
        if format == Format::Text && command != Command::Verify {
            return Err(CliError::usage("--format text is only available for verify"));
        }
        let perturb = flags.perturb.as_deref().map(parse_rational).transpose().map_err(CliError::from_lib)?;

        Ok(Self {
            command,
            potential,
            potential_text,
            bc,
            k,
            n_cut: flags.n.or(file.n),
            caps,
            steps,
            precision,
            delta,
            range,
            z,
            criterion: flags.criterion.or(file.criterion).unwrap_or(CriterionArg::C1),
            format,
            out,
            preset,
            dirichlet: flags.dirichlet || file.dirichlet.unwrap_or(false),
            refine: !flags.no_refine && file.refine.unwrap_or(true),
            thresholds,
            perturb,
        })
    }

    /// The indices selected by `--delta` within `--range`, or the whole range.
    pub fn indices(&self, default_range: (u64, u64)) -> CliResult<Vec<u64>> {
        let (lo, hi) = self.range.unwrap_or(default_range);
        match &self.delta {
            None => Ok((lo.max(1)..=hi).collect()),
            Some(g) => {
                let set = hillbasis::criteria::IndexSet::new(g.clone(), hillbasis::criteria::Parity::Both, lo..=hi);
                set.indices(self.potential.as_two_term().as_ref()).map_err(CliError::from_lib)
            }
        }
    }
}
