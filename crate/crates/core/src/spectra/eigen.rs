//! Dense non-Hermitian eigenvalues: balancing, Householder reduction to
//! Hessenberg form, then single-shift QR with deflation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }
}

fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two so rows and columns have
/// comparable norms. Eigenvalues are unchanged exactly.
pub fn balance(a: &mut CMatrix) {
    let n = a.n;
    let radix = 2.0f64;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += l1(a.get(j, i));
                    r += l1(a.get(i, j));
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = 1.0;
            while c < g {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    *a.at(i, j) *= g;
                }
                for j in 0..n {
                    *a.at(j, i) *= f;
                }
            }
        }
    }
}

/// In-place reduction to upper Hessenberg form by Householder reflections.
pub fn hessenberg(a: &mut CMatrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = (k + 1..n).map(|i| a.get(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a.get(i, k)).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // A ← (I − 2vv*) A
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * a.get(k + 1 + t, j)).sum();
            let f = dot * 2.0;
            for (t, vt) in v.iter().enumerate() {
                *a.at(k + 1 + t, j) -= vt * f;
            }
        }
        // A ← A (I − 2vv*)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| a.get(i, k + 1 + t) * vt).sum();
            let f = dot * 2.0;
            for (t, vt) in v.iter().enumerate() {
                *a.at(i, k + 1 + t) -= f * vt.conj();
            }
        }
        for i in k + 2..n {
            a.set(i, k, Complex64::new(0.0, 0.0));
        }
    }
}

/// Eigenvalue of [[a, b], [c, d]] closest to d.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Plane rotation (c real, s complex) mapping (x, y) to (r, 0).
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

/// Eigenvalues of a Hessenberg matrix; the matrix is destroyed.
fn hessenberg_qr(h: &mut CMatrix) -> Result<Vec<Complex64>> {
    let n = h.n;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let budget = 100 * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n - 1;
    let eps = f64::EPSILON;
    let anorm = h.norm().max(f64::MIN_POSITIVE);
    loop {
        if hi == 0 {
            eig[0] = h.get(0, 0);
            break;
        }
        let mut l = hi;
        while l > 0 {
            let s = h.get(l - 1, l - 1).norm() + h.get(l, l).norm();
            let s = if s == 0.0 { anorm } else { s };
            if h.get(l, l - 1).norm() <= eps * s {
                h.set(l, l - 1, Complex64::new(0.0, 0.0));
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h.get(hi, hi);
            hi -= 1;
            its = 0;
            continue;
        }
        total += 1;
        its += 1;
        if total > budget {
            return Err(Error::NonConvergence { iterations: total });
        }
        let mu = if its.is_multiple_of(10) {
            let t = h.get(hi, hi - 1).norm() + if hi >= 2 { h.get(hi - 1, hi - 2).norm() } else { 0.0 };
            h.get(hi, hi) + Complex64::new(0.75 * t, 0.5 * t)
        } else {
            wilkinson(h.get(hi - 1, hi - 1), h.get(hi - 1, hi), h.get(hi, hi - 1), h.get(hi, hi))
        };
        for k in l..=hi {
            *h.at(k, k) -= mu;
        }
        let mut rots = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
            for j in k..=hi {
                let x = h.get(k, j);
                let y = h.get(k + 1, j);
                h.set(k, j, x * c + s * y);
                h.set(k + 1, j, -s.conj() * x + y * c);
            }
            rots.push((c, s));
        }
        for (idx, (c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let u = h.get(i, k);
                let v = h.get(i, k + 1);
                h.set(i, k, u * *c + v * s.conj());
                h.set(i, k + 1, -u * *s + v * *c);
            }
        }
        for k in l..=hi {
            *h.at(k, k) += mu;
        }
    }
    Ok(eig)
}

/// Orders by real part, then imaginary part.
pub fn sort_eigenvalues(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// All eigenvalues of a dense complex matrix, sorted by (Re, Im).
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    if a.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut eig = hessenberg_qr(&mut h)?;
    sort_eigenvalues(&mut eig);
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Smallest singular value of (A − λI) estimated by inverse iteration on
    /// the normal equations; a backward-error proxy independent of the QR code.
    fn residual(a: &CMatrix, lam: Complex64) -> f64 {
        let n = a.dim();
        let mut m = a.clone();
        for i in 0..n {
            *m.at(i, i) -= lam;
        }
        // Gaussian elimination with partial pivoting to solve (A − λI)x = b repeatedly.
        let lu = lu(&m);
        let mut x = vec![c(1.0, 0.3); n];
        let mut est = f64::INFINITY;
        for _ in 0..6 {
            let y = lu_solve(&lu, &x);
            let ny = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !ny.is_finite() || ny == 0.0 {
                return 0.0;
            }
            let nx = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            est = nx / ny;
            x = y.iter().map(|z| z / ny).collect();
        }
        est
    }

    fn lu(m: &CMatrix) -> (CMatrix, Vec<usize>) {
        let n = m.dim();
        let mut a = m.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a.get(i, k).norm().total_cmp(&a.get(j, k).norm())).unwrap();
            if p != k {
                for j in 0..n {
                    let t = a.get(k, j);
                    a.set(k, j, a.get(p, j));
                    a.set(p, j, t);
                }
                piv.swap(k, p);
            }
            let d = a.get(k, k);
            if d.norm() == 0.0 {
                a.set(k, k, c(1e-300, 0.0));
            }
            for i in k + 1..n {
                let f = a.get(i, k) / a.get(k, k);
                a.set(i, k, f);
                for j in k + 1..n {
                    let v = a.get(i, j) - f * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        (a, piv)
    }

    fn lu_solve((a, piv): &(CMatrix, Vec<usize>), b: &[Complex64]) -> Vec<Complex64> {
        let n = a.dim();
        let mut y: Vec<Complex64> = piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - a.get(i, j) * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] = y[i] - a.get(i, j) * y[j];
            }
            y[i] /= a.get(i, i);
        }
        y
    }

    #[test]
    fn diagonal_and_swap() {
        let d = CMatrix::from_rows(&[
            vec![c(9.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)],
        ]);
        assert_eq!(eigenvalues(&d).unwrap(), vec![c(1.0, 0.0), c(4.0, 0.0), c(9.0, 0.0)]);
        let s = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let e = eigenvalues(&s).unwrap();
        assert!((e[0] - c(-1.0, 0.0)).norm() < 1e-14 && (e[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn jordan_block_and_rotation() {
        let j = CMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]]);
        for e in eigenvalues(&j).unwrap() {
            assert!((e - c(2.0, 0.0)).norm() < 1e-7);
        }
        let r = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(-1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]);
        let e = eigenvalues(&r).unwrap();
        assert!((e[0] - c(0.0, -1.0)).norm() < 1e-14 && (e[1] - c(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn random_matrices_have_small_backward_error() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in [1usize, 2, 5, 17, 40] {
            let rows: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| c(next(), next())).collect()).collect();
            let a = CMatrix::from_rows(&rows);
            let eig = eigenvalues(&a).unwrap();
            assert_eq!(eig.len(), n);
            let trace: Complex64 = (0..n).map(|i| a.get(i, i)).sum();
            let sum: Complex64 = eig.iter().sum();
            assert!((trace - sum).norm() < 1e-10 * (n as f64));
            for lam in eig {
                assert!(residual(&a, lam) < 1e-11 * a.norm(), "n={n}");
            }
        }
    }

    #[test]
    fn hessenberg_preserves_trace_and_shape() {
        let rows: Vec<Vec<Complex64>> =
            (0..6).map(|i| (0..6).map(|j| c((i * 7 + j * 3) as f64 % 5.0, (i + j) as f64 % 3.0)).collect()).collect();
        let a = CMatrix::from_rows(&rows);
        let mut h = a.clone();
        hessenberg(&mut h);
        for i in 2..6 {
            for j in 0..i - 1 {
                assert_eq!(h.get(i, j), c(0.0, 0.0));
            }
        }
        let t1: Complex64 = (0..6).map(|i| a.get(i, i)).sum();
        let t2: Complex64 = (0..6).map(|i| h.get(i, i)).sum();
        assert!((t1 - t2).norm() < 1e-12);
    }
}
