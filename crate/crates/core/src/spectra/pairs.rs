//! Localization of eigenvalues in the discs D_n = {|z − n²| < 1} and
//! assembly of per-index spectral records.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;

use super::assemble::assemble;
use super::dirichlet::dirichlet_near;
use super::eigen::eigenvalues;
use super::refine::{complex_le, refine_pair};
use super::BoundaryCondition;
use crate::error::{Error, Result};
use crate::numerics::{check_precision, DEFAULT_PRECISION};
use crate::potential::FourierPotential;
use crate::report::{c64, opt_c64};

/// Default absolute gap below which a hardware-precision pair is flagged double.
pub const DEFAULT_DOUBLE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Multiplicity {
    #[serde(rename = "simple-pair")]
    Simple,
    #[serde(rename = "double")]
    Double,
}

/// Pair values carried at the working precision.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisePair {
    pub lambda_minus: Complex,
    pub lambda_plus: Complex,
    pub mu: Option<Complex>,
}

/// Per-index record of the two eigenvalues in D_n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralPair {
    pub n: u64,
    #[serde(with = "c64")]
    pub lambda_minus: Complex64,
    #[serde(with = "c64")]
    pub lambda_plus: Complex64,
    #[serde(with = "opt_c64")]
    pub mu: Option<Complex64>,
    /// |λ⁺ − λ⁻|.
    pub gap: f64,
    /// |λ⁺ − μ|.
    pub deviation: Option<f64>,
    /// ½(λ⁻ + λ⁺) − n².
    #[serde(with = "c64")]
    pub z_star: Complex64,
    pub multiplicity: Multiplicity,
    /// Whether gap and deviation come from the high-precision values.
    pub refined: bool,
    #[serde(skip)]
    pub precise: Option<PrecisePair>,
}

fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    let p = a.prec().0.max(b.prec().0);
    Float::with_val(p, Complex::with_val(p, a - b).abs_ref()).to_f64()
}

impl SpectralPair {
    fn from_f64(n: u64, a: Complex64, b: Complex64, double_tol: f64) -> Self {
        let (lm, lp) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
        let gap = (lp - lm).norm();
        Self {
            n,
            lambda_minus: lm,
            lambda_plus: lp,
            mu: None,
            gap,
            deviation: None,
            z_star: (lm + lp) * 0.5 - Complex64::new((n * n) as f64, 0.0),
            multiplicity: if gap <= double_tol { Multiplicity::Double } else { Multiplicity::Simple },
            refined: false,
            precise: None,
        }
    }

    fn apply_refinement(&mut self, lm: Complex, lp: Complex, prec: u32) {
        let (lm, lp) = if complex_le(&lm, &lp) { (lm, lp) } else { (lp, lm) };
        self.gap = dist(&lp, &lm);
        self.lambda_minus = to_c64(&lm);
        self.lambda_plus = to_c64(&lp);
        let nn = Complex::with_val(prec, (self.n * self.n, 0));
        let mid = Complex::with_val(prec, &lm + &lp) / 2u32 - nn;
        self.z_star = to_c64(&mid);
        self.multiplicity =
            if self.gap <= refined_double_tol(self.n, prec) { Multiplicity::Double } else { Multiplicity::Simple };
        self.refined = true;
        self.precise = Some(PrecisePair { lambda_minus: lm, lambda_plus: lp, mu: None });
    }

    fn apply_dirichlet(&mut self, mu: Complex) {
        self.mu = Some(to_c64(&mu));
        self.deviation = Some(match &self.precise {
            Some(p) => dist(&p.lambda_plus, &mu),
            None => (self.lambda_plus - to_c64(&mu)).norm(),
        });
        if let Some(p) = &mut self.precise {
            p.mu = Some(mu);
        }
    }

    pub fn is_double(&self) -> bool {
        self.multiplicity == Multiplicity::Double
    }
}

/// Double-flag threshold on the high-precision path: 2^{−(prec/2 − 16)}·max(1, n²).
pub fn refined_double_tol(n: u64, prec: u32) -> f64 {
    2f64.powi(-(prec as i32 / 2 - 16)) * ((n * n) as f64).max(1.0)
}

/// Whether index n belongs to the parity class of the boundary condition.
pub fn in_class(bc: BoundaryCondition, n: u64) -> bool {
    match bc {
        BoundaryCondition::PerPlus => n.is_multiple_of(2),
        BoundaryCondition::PerMinus => n % 2 == 1,
        BoundaryCondition::Dirichlet => true,
    }
}

fn disc_members(eigs: &[Complex64], n: u64) -> Vec<Complex64> {
    let c = Complex64::new((n * n) as f64, 0.0);
    eigs.iter().copied().filter(|z| (z - c).norm() < 1.0).collect()
}

/// Pairs in D_n for N < n ≤ n_max, plus the eigenvalues left over.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Localization {
    pub pairs: Vec<SpectralPair>,
    /// Eigenvalues with Re λ < (N + ½)².
    #[serde(serialize_with = "ser_c64_vec")]
    pub low_block: Vec<Complex64>,
    /// Eigenvalues below (n_max + ½)² that are in no disc and not in the low block.
    #[serde(serialize_with = "ser_c64_vec")]
    pub strays: Vec<Complex64>,
}

fn ser_c64_vec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| crate::report::C64::from(*z)))
}

/// Groups eigenvalues by disc; errors when a disc does not hold exactly two.
pub fn localize_pairs(
    eigs: &[Complex64],
    bc: BoundaryCondition,
    n_cut: u64,
    n_max: u64,
    double_tol: f64,
) -> Result<Localization> {
    if bc == BoundaryCondition::Dirichlet {
        return Err(Error::Config("pairs are defined for periodic and antiperiodic conditions".into()));
    }
    let mut pairs = Vec::new();
    let mut used = vec![false; eigs.len()];
    let low_edge = (n_cut as f64 + 0.5).powi(2);
    for n in (n_cut + 1)..=n_max {
        if !in_class(bc, n) {
            continue;
        }
        let members = disc_members(eigs, n);
        if members.len() != 2 {
            return Err(Error::Localization { n, count: members.len(), expected: 2 });
        }
        let c = Complex64::new((n * n) as f64, 0.0);
        for (i, z) in eigs.iter().enumerate() {
            if (z - c).norm() < 1.0 {
                used[i] = true;
            }
        }
        pairs.push(SpectralPair::from_f64(n, members[0], members[1], double_tol));
    }
    let high_edge = (n_max as f64 + 0.5).powi(2);
    let mut low_block = Vec::new();
    let mut strays = Vec::new();
    for (i, z) in eigs.iter().enumerate() {
        if used[i] {
            continue;
        }
        if z.re < low_edge {
            low_block.push(*z);
        } else if z.re < high_edge {
            strays.push(*z);
        }
    }
    Ok(Localization { pairs, low_block, strays })
}

/// Smallest N such that every disc D_n in the parity class with N < n ≤ n_max
/// holds exactly two eigenvalues.
pub fn working_n(eigs: &[Complex64], bc: BoundaryCondition, n_max: u64) -> u64 {
    (1..=n_max)
        .rev()
        .filter(|&n| in_class(bc, n))
        .find(|&n| disc_members(eigs, n).len() != 2)
        .unwrap_or(0)
}

/// Knobs of a spectrum run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumConfig {
    /// Galerkin cutoff K.
    pub k: usize,
    /// Localization threshold N; chosen empirically when absent.
    pub n_cut: Option<u64>,
    /// Largest disc index examined; defaults to K/2.
    pub n_max: Option<u64>,
    pub precision: u32,
    /// Recompute each pair at `precision` bits.
    pub refine: bool,
    /// Attach the Dirichlet eigenvalue μ_n to every pair.
    pub dirichlet: bool,
    /// Double-flag tolerance of the hardware-precision path.
    pub double_tol: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            k: 64,
            n_cut: None,
            n_max: None,
            precision: DEFAULT_PRECISION,
            refine: true,
            dirichlet: false,
            double_tol: DEFAULT_DOUBLE_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub bc: BoundaryCondition,
    pub k: usize,
    /// The N in use, empirical unless supplied.
    pub n_cut: u64,
    pub n_cut_empirical: bool,
    pub n_max: u64,
    #[serde(flatten)]
    pub localization: Localization,
}

impl SpectrumReport {
    pub fn pairs(&self) -> &[SpectralPair] {
        &self.localization.pairs
    }

    pub fn pair(&self, n: u64) -> Option<&SpectralPair> {
        self.localization.pairs.iter().find(|p| p.n == n)
    }
}

/// Galerkin eigenvalues, localization, optional refinement and Dirichlet data.
pub fn spectrum(pot: &FourierPotential, bc: BoundaryCondition, cfg: &SpectrumConfig) -> Result<SpectrumReport> {
    check_precision(cfg.precision)?;
    if bc == BoundaryCondition::Dirichlet {
        return Err(Error::Config("use per+ or per- for pair spectra; Dirichlet values attach via --dirichlet".into()));
    }
    if cfg.k == 0 {
        return Err(Error::Config("cutoff K must be at least 1".into()));
    }
    let n_max = cfg.n_max.unwrap_or(cfg.k as u64 / 2);
    if n_max as usize > cfg.k {
        return Err(Error::Config(format!("n_max = {n_max} exceeds the cutoff K = {}", cfg.k)));
    }
    let op = assemble(pot, bc, cfg.k)?;
    let eigs = eigenvalues(&op.matrix)?;
    let (n_cut, empirical) = match cfg.n_cut {
        Some(n) => (n, false),
        None => (working_n(&eigs, bc, n_max), true),
    };
    let mut loc = localize_pairs(&eigs, bc, n_cut, n_max, cfg.double_tol)?;
    let prec = cfg.precision;
    let updated: Result<Vec<SpectralPair>> = loc
        .pairs
        .par_iter()
        .map(|pair| {
            let mut p = pair.clone();
            if cfg.refine {
                let guess = (p.lambda_minus + p.lambda_plus) * 0.5;
                let r = refine_pair(pot, bc, cfg.k, p.n, guess, prec)?;
                p.apply_refinement(r.lambda_minus, r.lambda_plus, prec);
            }
            if cfg.dirichlet {
                p.apply_dirichlet(dirichlet_near(pot, cfg.k, p.n, prec)?);
            }
            Ok(p)
        })
        .collect();
    loc.pairs = updated?;
    Ok(SpectrumReport { bc, k: cfg.k, n_cut, n_cut_empirical: empirical, n_max, localization: loc })
}
