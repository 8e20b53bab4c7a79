//! High-precision refinement of an eigenvalue pair of the periodic or
//! antiperiodic Galerkin matrix.
//!
//! The pair near n² can be split by far less than the f64 resolution, so it
//! is recomputed in MPC arithmetic: two-dimensional inverse subspace
//! iteration with a banded LU of (A − σI), followed by the Ritz values of A on
//! the converged subspace.

use num_complex::Complex64;
use rug::{Complex, Float};

use super::assemble::{exp_indices, frequency};
use super::BoundaryCondition;
use crate::error::{Error, Result};
use crate::numerics::check_precision;
use crate::potential::FourierPotential;

/// Banded complex matrix stored densely; only the band is touched.
struct BandMatrix {
    n: usize,
    /// Lower and upper bandwidth of the original matrix.
    bw: usize,
    a: Vec<Vec<Complex>>,
}

impl BandMatrix {
    fn galerkin(pot: &FourierPotential, bc: BoundaryCondition, k: usize, shift: &Complex, prec: u32) -> Self {
        let idx = exp_indices(bc, k);
        let n = idx.len();
        let bw = (pot.max_frequency() / 2) as usize;
        let mut a = vec![vec![Complex::new(prec); n]; n];
        for r in 0..n {
            let lo = r.saturating_sub(bw);
            let hi = (r + bw).min(n - 1);
            for c in lo..=hi {
                let m = 2 * (idx[r] - idx[c]);
                if let Some(v) = pot.coefficient_ref(m) {
                    a[r][c] = v.to_complex(prec);
                }
            }
            let f = frequency(bc, idx[r]);
            a[r][r] += Complex::with_val(prec, f * f);
            a[r][r] -= shift;
        }
        Self { n, bw, a }
    }

    fn mul_vec(&self, x: &[Complex], shift: &Complex, prec: u32) -> Vec<Complex> {
        (0..self.n)
            .map(|r| {
                let lo = r.saturating_sub(self.bw);
                let hi = (r + self.bw).min(self.n - 1);
                let mut acc = Complex::new(prec);
                for c in lo..=hi {
                    acc += Complex::with_val(prec, &self.a[r][c] * &x[c]);
                }
                acc += Complex::with_val(prec, shift * &x[r]);
                acc
            })
            .collect()
    }
}

/// LU factors of a banded matrix with partial pivoting.
struct BandLu {
    n: usize,
    upper: usize,
    a: Vec<Vec<Complex>>,
    piv: Vec<usize>,
}

fn modulus_sqr(z: &Complex) -> Float {
    let prec = z.prec().0;
    Float::with_val(prec, z.real() * z.real()) + Float::with_val(prec, z.imag() * z.imag())
}

impl BandLu {
    fn factor(m: BandMatrix, tiny: &Float) -> Self {
        let n = m.n;
        let lower = m.bw;
        let upper = 2 * m.bw;
        let mut a = m.a;
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + lower).min(n - 1);
            let mut p = k;
            let mut best = modulus_sqr(&a[k][k]);
            for (i, row) in a.iter().enumerate().take(last + 1).skip(k + 1) {
                let v = modulus_sqr(&row[k]);
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv[k] = p;
            if p != k {
                a.swap(p, k);
            }
            if a[k][k].real().is_zero() && a[k][k].imag().is_zero() {
                *a[k][k].mut_real() += tiny;
            }
            let right = (k + upper).min(n - 1);
            let pivot = a[k][k].clone();
            for i in k + 1..=last {
                if a[i][k].real().is_zero() && a[i][k].imag().is_zero() {
                    continue;
                }
                let l = Complex::with_val(pivot.prec(), &a[i][k] / &pivot);
                for j in k + 1..=right {
                    let t = Complex::with_val(pivot.prec(), &l * &a[k][j]);
                    a[i][j] -= t;
                }
                a[i][k] = l;
            }
        }
        Self { n, upper, a, piv }
    }

    fn solve(&self, b: &[Complex]) -> Vec<Complex> {
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            if self.piv[k] != k {
                x.swap(k, self.piv[k]);
            }
        }
        // Row swaps move multipliers below the band, so L is scanned in full.
        for k in 0..n {
            for i in k + 1..n {
                if self.a[i][k].real().is_zero() && self.a[i][k].imag().is_zero() {
                    continue;
                }
                let t = Complex::with_val(x[k].prec(), &self.a[i][k] * &x[k]);
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            let right = (i + self.upper).min(n - 1);
            for j in i + 1..=right {
                let t = Complex::with_val(x[i].prec(), &self.a[i][j] * &x[j]);
                x[i] -= t;
            }
            x[i] /= &self.a[i][i];
        }
        x
    }
}

fn dot(u: &[Complex], v: &[Complex], prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    for (a, b) in u.iter().zip(v) {
        acc += Complex::with_val(prec, a.conj_ref()) * b;
    }
    acc
}

fn norm(u: &[Complex], prec: u32) -> Float {
    let mut acc = Float::new(prec);
    for a in u {
        acc += modulus_sqr(a);
    }
    acc.sqrt()
}

fn normalize(u: &mut [Complex], prec: u32) -> Result<()> {
    let nv = norm(u, prec);
    if nv.is_zero() || !nv.is_finite() {
        return Err(Error::Degenerate("inverse iteration lost its subspace".into()));
    }
    for x in u.iter_mut() {
        *x /= &nv;
    }
    Ok(())
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
fn orthonormalize(q1: &mut [Complex], q2: &mut [Complex], prec: u32) -> Result<()> {
    normalize(q1, prec)?;
    for _ in 0..2 {
        let c = dot(q1, q2, prec);
        for (a, b) in q2.iter_mut().zip(q1.iter()) {
            *a -= Complex::with_val(prec, &c * b);
        }
    }
    normalize(q2, prec)
}

/// Eigenvalues of [[h11, h12], [h21, h22]], ordered by (Re, Im).
pub fn eig2(h11: &Complex, h12: &Complex, h21: &Complex, h22: &Complex, prec: u32) -> (Complex, Complex) {
    let half = Complex::with_val(prec, h11 - h22) / 2u32;
    let disc = Complex::with_val(prec, &half * &half) + Complex::with_val(prec, h12 * h21);
    let root = disc.sqrt();
    let mean = Complex::with_val(prec, h11 + h22) / 2u32;
    let a = Complex::with_val(prec, &mean + &root);
    let b = Complex::with_val(prec, &mean - &root);
    if complex_le(&a, &b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// (Re, Im) lexicographic order.
pub fn complex_le(a: &Complex, b: &Complex) -> bool {
    match a.real().partial_cmp(b.real()) {
        Some(std::cmp::Ordering::Less) => true,
        Some(std::cmp::Ordering::Greater) => false,
        _ => a.imag() <= b.imag(),
    }
}

/// Refined eigenvalue pair near n².
#[derive(Clone, Debug)]
pub struct RefinedPair {
    pub lambda_minus: Complex,
    pub lambda_plus: Complex,
    pub iterations: usize,
}

/// Basis positions of the free modes e^{±inx}.
fn free_modes(bc: BoundaryCondition, k: usize, n: u64) -> Result<(usize, usize)> {
    let idx = exp_indices(bc, k);
    let ni = n as i64;
    let find = |freq: i64| idx.iter().position(|&j| frequency(bc, j) == freq);
    match (find(-ni), find(ni)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Config(format!("n = {n} is outside the basis of cutoff K = {k} for {bc}"))),
    }
}

/// Recomputes the two eigenvalues in the disc around n² at `prec` bits,
/// starting from the hardware-precision center `guess`.
pub fn refine_pair(
    pot: &FourierPotential,
    bc: BoundaryCondition,
    k: usize,
    n: u64,
    guess: Complex64,
    prec: u32,
) -> Result<RefinedPair> {
    check_precision(prec)?;
    if bc == BoundaryCondition::Dirichlet {
        return Err(Error::Config("pair refinement applies to periodic and antiperiodic conditions".into()));
    }
    let wp = prec + 64;
    let (i1, i2) = free_modes(bc, k, n)?;
    let offset = Complex64::new(0.6, 0.8) * 2f64.powi(-30);
    let sigma = Complex::with_val(wp, (guess.re + offset.re, guess.im + offset.im));
    let band = BandMatrix::galerkin(pot, bc, k, &sigma, wp);
    let dim = band.n;
    let tiny = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let a_for_ritz = BandMatrix::galerkin(pot, bc, k, &sigma, wp);
    let lu = BandLu::factor(band, &tiny);

    let mut q1 = vec![Complex::new(wp); dim];
    let mut q2 = vec![Complex::new(wp); dim];
    q1[i1] = Complex::with_val(wp, 1);
    q2[i2] = Complex::with_val(wp, 1);

    let scale = Float::with_val(wp, Float::i_exp(1, -(prec as i32 - 24))) * (n * n).max(1);
    let mut prev: Option<(Complex, Complex)> = None;
    for it in 1..=80 {
        q1 = lu.solve(&q1);
        q2 = lu.solve(&q2);
        orthonormalize(&mut q1, &mut q2, wp)?;
        let aq1 = a_for_ritz.mul_vec(&q1, &sigma, wp);
        let aq2 = a_for_ritz.mul_vec(&q2, &sigma, wp);
        let h11 = dot(&q1, &aq1, wp);
        let h12 = dot(&q1, &aq2, wp);
        let h21 = dot(&q2, &aq1, wp);
        let h22 = dot(&q2, &aq2, wp);
        let (lm, lp) = eig2(&h11, &h12, &h21, &h22, wp);
        if let Some((pm, pp)) = &prev {
            let dm = Complex::with_val(wp, &lm - pm).abs().real().clone();
            let dp = Complex::with_val(wp, &lp - pp).abs().real().clone();
            if it >= 3 && dm <= scale && dp <= scale {
                return Ok(RefinedPair {
                    lambda_minus: Complex::with_val(prec, lm),
                    lambda_plus: Complex::with_val(prec, lp),
                    iterations: it,
                });
            }
        }
        prev = Some((lm, lp));
    }
    Err(Error::NonConvergence { iterations: 80 })
}
