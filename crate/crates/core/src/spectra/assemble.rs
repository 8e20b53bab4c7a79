//! Galerkin matrices of L = −d²/dx² + v in exponential and sine bases.

use num_complex::Complex64;
use serde::Serialize;

use super::eigen::CMatrix;
use super::BoundaryCondition;
use crate::error::{Error, Result};
use crate::potential::FourierPotential;

/// A truncated operator: the basis labels and the dense matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedOperator {
    pub bc: BoundaryCondition,
    pub cutoff: usize,
    /// Basis labels: k for e^{2ikx} (Per+), k for e^{(2k+1)ix} (Per−), k for sin(kx) (Dirichlet).
    pub indices: Vec<i64>,
    #[serde(skip)]
    pub matrix: CMatrix,
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

/// Basis labels of the exponential bases.
pub fn exp_indices(bc: BoundaryCondition, k: usize) -> Vec<i64> {
    let k = k as i64;
    match bc {
        BoundaryCondition::PerPlus => (-k..=k).collect(),
        BoundaryCondition::PerMinus => (-k..k).collect(),
        BoundaryCondition::Dirichlet => (1..=k).collect(),
    }
}

/// Frequency of basis function `k`.
pub fn frequency(bc: BoundaryCondition, k: i64) -> i64 {
    match bc {
        BoundaryCondition::PerPlus => 2 * k,
        BoundaryCondition::PerMinus => 2 * k + 1,
        BoundaryCondition::Dirichlet => k,
    }
}

/// ⟨sin jx, v sin kx⟩ normalized so that v = 0 gives the identity scaling.
///
/// For j − k even only the resonant Fourier modes contribute. For j − k odd
/// every mode couples through the boundary terms of ∫₀^π e^{iqx}dx.
pub fn dirichlet_entry(pot: &FourierPotential, j: i64, k: i64) -> Complex64 {
    let v = |m: i64| pot.coefficient_ref(m).map(|x| x.to_c64()).unwrap_or_default();
    if (j - k) % 2 == 0 {
        return 0.5 * (v(j - k) + v(k - j) - v(j + k) - v(-j - k));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, c) in pot.terms() {
        let c = c.to_c64();
        let s = 1.0 / (m + j - k) as f64 + 1.0 / (m - j + k) as f64
            - 1.0 / (m + j + k) as f64
            - 1.0 / (m - j - k) as f64;
        acc += c * s;
    }
    acc * Complex64::new(0.0, 1.0 / std::f64::consts::PI)
}

/// Galerkin truncation at cutoff K.
pub fn assemble(pot: &FourierPotential, bc: BoundaryCondition, k: usize) -> Result<TruncatedOperator> {
    if k == 0 {
        return Err(Error::Config("cutoff K must be at least 1".into()));
    }
    let indices = exp_indices(bc, k);
    let dim = indices.len();
    let mut m = CMatrix::zeros(dim);
    for (r, &kr) in indices.iter().enumerate() {
        for (c, &kc) in indices.iter().enumerate() {
            let mut e = match bc {
                BoundaryCondition::Dirichlet => dirichlet_entry(pot, kr, kc),
                _ => pot.coefficient_ref(2 * (kr - kc)).map(|x| x.to_c64()).unwrap_or_default(),
            };
            if r == c {
                let f = frequency(bc, kr) as f64;
                e += f * f;
            }
            m.set(r, c, e);
        }
    }
    Ok(TruncatedOperator { bc, cutoff: k, indices, matrix: m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::two_term_int;

    #[test]
    fn free_operators() {
        let z = FourierPotential::empty();
        let op = assemble(&z, BoundaryCondition::PerPlus, 1).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| op.matrix.get(i, i).re).collect();
        assert_eq!(diag, vec![4.0, 0.0, 4.0]);
        let op = assemble(&z, BoundaryCondition::Dirichlet, 3).unwrap();
        let diag: Vec<f64> = (0..3).map(|i| op.matrix.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 4.0, 9.0]);
        let op = assemble(&z, BoundaryCondition::PerMinus, 2).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| op.matrix.get(i, i).re).collect();
        assert_eq!(diag, vec![9.0, 1.0, 1.0, 9.0]);
        assert!(assemble(&z, BoundaryCondition::PerPlus, 0).is_err());
    }

    #[test]
    fn two_term_entries() {
        let (p, _) = two_term_int(1, 1, 1, 1).unwrap();
        let op = assemble(&p, BoundaryCondition::PerPlus, 1).unwrap();
        // rows/cols ordered k = -1, 0, 1; entry (k=1, k'=0) is V(2), (k=0, k'=1) is V(-2)
        assert_eq!(op.matrix.get(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(op.matrix.get(1, 2), Complex64::new(1.0, 0.0));
        assert_eq!(op.matrix.get(0, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dirichlet_entries_match_quadrature() {
        // (2/π)∫₀^π v(x) sin(jx) sin(kx) dx by composite Simpson as an oracle.
        let (p, _) = two_term_int(1, 2, 1, 3).unwrap();
        let v = |x: f64| Complex64::new(0.0, -2.0 * x).exp() + 2.0 * Complex64::new(0.0, 6.0 * x).exp();
        let steps = 20000;
        let h = std::f64::consts::PI / steps as f64;
        for (j, k) in [(1i64, 1i64), (1, 2), (2, 5), (3, 3), (4, 7), (6, 3)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..=steps {
                let x = i as f64 * h;
                let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += v(x) * (j as f64 * x).sin() * (k as f64 * x).sin() * w;
            }
            let quad = acc * h / 3.0 * (2.0 / std::f64::consts::PI);
            let got = dirichlet_entry(&p, j, k);
            assert!((got - quad).norm() < 1e-9, "j={j} k={k} got={got} quad={quad}");
        }
    }
}
