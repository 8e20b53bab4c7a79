//! Fourier–Galerkin spectra of L = −d²/dx² + v under periodic, antiperiodic
//! and Dirichlet conditions on [0, π].

pub mod assemble;
pub mod dirichlet;
pub mod eigen;
pub mod pairs;
pub mod refine;
pub mod residual;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub use assemble::{assemble, TruncatedOperator};
pub use dirichlet::{dirichlet_close, dirichlet_near};
pub use eigen::{eigenvalues, CMatrix};
pub use pairs::{
    localize_pairs, spectrum, working_n, Localization, Multiplicity, SpectralPair, SpectrumConfig, SpectrumReport,
};
pub use refine::refine_pair;
pub use residual::reduction_residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCondition {
    /// y(π) = y(0), y′(π) = y′(0); basis e^{2ikx}.
    #[serde(rename = "per+")]
    PerPlus,
    /// y(π) = −y(0), y′(π) = −y′(0); basis e^{(2k+1)ix}.
    #[serde(rename = "per-")]
    PerMinus,
    /// y(0) = y(π) = 0; basis sin(kx).
    #[serde(rename = "dirichlet")]
    Dirichlet,
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryCondition::PerPlus => "per+",
            BoundaryCondition::PerMinus => "per-",
            BoundaryCondition::Dirichlet => "dirichlet",
        })
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per+" | "periodic" => Ok(BoundaryCondition::PerPlus),
            "per-" | "antiperiodic" => Ok(BoundaryCondition::PerMinus),
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            other => Err(Error::Parse(format!("unknown boundary condition {other:?}"))),
        }
    }
}
