//! Dirichlet eigenvalues near n².
//!
//! The sine-basis Galerkin matrix converges only algebraically when v is not
//! even, so its eigenvalue in D_n serves as a starting point. The value is
//! then polished by shooting: y″ = (v − λ)y, y(0) = 0, y′(0) = 1 is integrated
//! by Taylor series in MPC arithmetic together with w = ∂y/∂λ, and Newton's
//! method drives y(π; λ) to zero.

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Complex, Float};

use super::assemble::assemble;
use super::eigen::eigenvalues;
use super::BoundaryCondition;
use crate::error::{Error, Result};
use crate::numerics::check_precision;
use crate::potential::FourierPotential;

/// Values y(π), w(π) for the given λ.
pub fn shoot(pot: &FourierPotential, lambda: &Complex, prec: u32) -> (Complex, Complex) {
    let wp = prec + 32;
    let lam = Complex::with_val(wp, lambda);
    let lam_abs = lam.clone().abs().real().to_f64();
    let m_max = pot.max_frequency() as f64;
    let rate = lam_abs.sqrt().max(m_max).max(1.0);
    let steps = (std::f64::consts::PI * rate).ceil() as usize;
    let pi = Float::with_val(wp, Constant::Pi);
    let h = Complex::with_val(wp, &pi / steps as u32);
    let terms: Vec<(i64, Complex)> = pot.terms().map(|(m, v)| (m, v.to_complex(wp))).collect();
    let cutoff = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let max_order = 600usize;

    let (mut y, mut yp) = (Complex::new(wp), Complex::with_val(wp, 1));
    let (mut w, mut wpr) = (Complex::new(wp), Complex::new(wp));
    for step in 0..steps {
        let x0 = Float::with_val(wp, &pi * step as u32) / steps as u32;
        // v(x0 + t) = Σ_k v_k t^k; the k-th coefficient of e^{imx} is e^{imx0}(im)^k/k!.
        let mut phases: Vec<Complex> = terms
            .iter()
            .map(|(m, v)| {
                let arg = Complex::with_val(wp, (0, Float::with_val(wp, &x0 * *m)));
                Complex::with_val(wp, v * arg.exp())
            })
            .collect();
        let mut vk: Vec<Complex> = Vec::new();
        let mut c = vec![y.clone(), yp.clone()];
        let mut d = vec![w.clone(), wpr.clone()];
        let mut hk = Complex::with_val(wp, 1);
        let scale = {
            let s = Float::with_val(wp, y.abs_ref()) + Float::with_val(wp, yp.abs_ref()) + 1u32;
            s * &cutoff
        };
        let mut small = 0;
        let mut k = 0;
        while k + 2 < max_order {
            if vk.len() <= k {
                let mut acc = Complex::new(wp);
                for p in &phases {
                    acc += p;
                }
                vk.push(acc);
                let kk = vk.len() as u32;
                for (p, (m, _)) in phases.iter_mut().zip(&terms) {
                    let f = Complex::with_val(wp, (0, *m)) / kk;
                    *p *= f;
                }
            }
            let mut sy = Complex::new(wp);
            let mut sw = Complex::new(wp);
            for i in 0..=k {
                sy += Complex::with_val(wp, &vk[i] * &c[k - i]);
                sw += Complex::with_val(wp, &vk[i] * &d[k - i]);
            }
            sy -= Complex::with_val(wp, &lam * &c[k]);
            sw -= Complex::with_val(wp, &lam * &d[k]);
            sw -= &c[k];
            let denom = ((k + 2) * (k + 1)) as u32;
            c.push(sy / denom);
            d.push(sw / denom);
            k += 1;
            hk *= &h;
            let hk2 = Complex::with_val(wp, &hk * &h);
            let tail = Float::with_val(wp, Complex::with_val(wp, &c[k + 1] * &hk2).abs_ref())
                + Float::with_val(wp, Complex::with_val(wp, &d[k + 1] * &hk2).abs_ref());
            if tail < scale {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        let mut pw = Complex::with_val(wp, 1);
        let (mut ny, mut nyp, mut nw, mut nwp) = (Complex::new(wp), Complex::new(wp), Complex::new(wp), Complex::new(wp));
        for i in 0..c.len() {
            ny += Complex::with_val(wp, &c[i] * &pw);
            nw += Complex::with_val(wp, &d[i] * &pw);
            if i + 1 < c.len() {
                let f = Complex::with_val(wp, &pw * (i + 1) as u32);
                nyp += Complex::with_val(wp, &c[i + 1] * &f);
                nwp += Complex::with_val(wp, &d[i + 1] * &f);
            }
            pw *= &h;
        }
        y = ny;
        yp = nyp;
        w = nw;
        wpr = nwp;
    }
    (Complex::with_val(prec, y), Complex::with_val(prec, w))
}

/// Newton iteration on y(π; λ) = 0 from `start`.
pub fn polish(pot: &FourierPotential, start: Complex64, prec: u32) -> Result<Complex> {
    check_precision(prec)?;
    let wp = prec + 16;
    let mut lam = Complex::with_val(wp, (start.re, start.im));
    let tol = Float::with_val(wp, Float::i_exp(1, -(prec as i32 - 16)))
        * Float::with_val(wp, lam.abs_ref()).max(&Float::with_val(wp, 1));
    for _ in 0..60 {
        let (y, w) = shoot(pot, &lam, wp);
        if w.real().is_zero() && w.imag().is_zero() {
            return Err(Error::Degenerate("shooting derivative vanished".into()));
        }
        let delta = Complex::with_val(wp, &y / &w);
        lam -= &delta;
        if Float::with_val(wp, delta.abs_ref()) <= tol {
            return Ok(Complex::with_val(prec, lam));
        }
    }
    Err(Error::NonConvergence { iterations: 60 })
}

/// The Galerkin Dirichlet eigenvalues inside D_n = {|z − n²| < 1}.
pub fn galerkin_in_disc(pot: &FourierPotential, k: usize, n: u64) -> Result<Vec<Complex64>> {
    let op = assemble(pot, BoundaryCondition::Dirichlet, k)?;
    let eig = eigenvalues(&op.matrix)?;
    let c = Complex64::new((n * n) as f64, 0.0);
    Ok(eig.into_iter().filter(|z| (z - c).norm() < 1.0).collect())
}

/// The unique Dirichlet eigenvalue in D_n at `prec` bits.
pub fn dirichlet_near(pot: &FourierPotential, k: usize, n: u64, prec: u32) -> Result<Complex> {
    let inside = galerkin_in_disc(pot, k, n)?;
    if inside.len() != 1 {
        return Err(Error::Localization { n, count: inside.len(), expected: 1 });
    }
    let mu = polish(pot, inside[0], prec)?;
    let c = Complex::with_val(prec, (n * n, 0));
    if Complex::with_val(prec, &mu - &c).abs().real().to_f64() >= 1.0 {
        return Err(Error::Localization { n, count: 0, expected: 1 });
    }
    Ok(mu)
}

/// μ_n as a hardware complex number. `tol` bounds the Newton step, so the
/// working precision is chosen from it.
pub fn dirichlet_close(pot: &FourierPotential, k: usize, n: u64, tol: f64) -> Result<Complex64> {
    let bits = if tol > 0.0 { (-tol.log2()).ceil().max(0.0) as u32 + 24 } else { 128 };
    let mu = dirichlet_near(pot, k, n, bits.max(64))?;
    Ok(Complex64::new(mu.real().to_f64(), mu.imag().to_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::two_term_int;

    #[test]
    fn free_dirichlet() {
        let z = FourierPotential::empty();
        assert!((dirichlet_close(&z, 16, 3, 1e-12).unwrap() - Complex64::new(9.0, 0.0)).norm() < 1e-12);
        assert!((dirichlet_close(&z, 16, 5, 1e-12).unwrap() - Complex64::new(25.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn shooting_free_solution() {
        // y = sin(√λ x)/√λ, so y(π) = sin(√λ π)/√λ.
        let z = FourierPotential::empty();
        let lam = Complex::with_val(128, (6.25, 0));
        let (y, _) = shoot(&z, &lam, 128);
        let want = (Float::with_val(128, Constant::Pi) * 2.5f64).sin() / 2.5f64;
        assert!(Float::with_val(128, y.real() - &want).abs().to_f64() < 1e-30);
    }

    #[test]
    fn even_potential_matches_galerkin() {
        // For a = b the potential is even and the sine basis decouples exactly.
        let (p, _) = two_term_int(1, 1, 1, 1).unwrap();
        let inside = galerkin_in_disc(&p, 48, 4).unwrap();
        let mu = dirichlet_close(&p, 48, 4, 1e-13).unwrap();
        assert_eq!(inside.len(), 1);
        assert!((inside[0] - mu).norm() < 1e-10, "{} vs {}", inside[0], mu);
    }

    #[test]
    fn resolution_independent() {
        let (p, _) = two_term_int(1, 1, 1, 3).unwrap();
        let a = dirichlet_close(&p, 64, 8, 1e-14).unwrap();
        let b = dirichlet_close(&p, 128, 8, 1e-14).unwrap();
        assert!((a - b).norm() < 1e-10);
    }
}
