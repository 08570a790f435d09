//! Dense eigenvalue oracle for small complex matrices.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR iteration (Wilkinson shifts, with an exceptional shift every
//! few sweeps to break the symmetric stalls permutation matrices cause).
//! Every eigenvalue is then checked by inverse iteration: the residual
//! `||M v - lambda v|| / ||M||` must stay below [`RESIDUAL_LIMIT`].
//!
//! Nothing in this module knows about circulant structure or the DFT. It is
//! the independent side of every closed-form check in the crate.

use num_complex::Complex64;

use crate::error::{GcircError, Result};
use crate::matrix::DenseMatrix;
use crate::spectra::{Spectrum, DEFAULT_TOL};

pub const MAX_ORDER: usize = 128;
pub const RESIDUAL_LIMIT: f64 = 1e-8;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;
const EXCEPTIONAL_EVERY: usize = 10;

/// Eigenvalues together with the relative residual achieved for each.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub spectrum: Spectrum,
    pub residuals: Vec<f64>,
}

impl OracleResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// All eigenvalues of `m` with multiplicity, unordered.
pub fn dense_eigen_oracle(m: &DenseMatrix) -> Result<Spectrum> {
    Ok(dense_eigen_oracle_with_residuals(m)?.spectrum)
}

pub fn dense_eigen_oracle_with_residuals(m: &DenseMatrix) -> Result<OracleResult> {
    if !m.is_square() {
        return Err(GcircError::domain(format!(
            "oracle needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n > MAX_ORDER {
        return Err(GcircError::domain(format!(
            "oracle is limited to order {MAX_ORDER}, got {n}"
        )));
    }
    if m.entries()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(GcircError::domain("matrix has non-finite entries"));
    }

    let mut h = to_rows(m);
    hessenberg(&mut h);
    let values = hessenberg_qr(&mut h)?;

    let norm = m.frobenius_norm();
    let mut residuals = Vec::with_capacity(n);
    for &lambda in &values {
        let r = residual(m, lambda, norm);
        if r.is_nan() || r > RESIDUAL_LIMIT {
            return Err(GcircError::OracleFailure(format!(
                "eigenvalue {lambda} has relative residual {r:.3e}"
            )));
        }
        residuals.push(r);
    }
    Ok(OracleResult {
        spectrum: Spectrum::new(values, DEFAULT_TOL),
        residuals,
    })
}

type Rows = Vec<Vec<Complex64>>;

fn to_rows(m: &DenseMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn hessenberg(h: &mut Rows) {
    let n = h.len();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[i][k]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H <- (I - 2 v v^H) H
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * h[k + 1 + t][j])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                h[k + 1 + t][j] -= *vt * dot * 2.0;
            }
        }
        // H <- H (I - 2 v v^H)
        for row in h.iter_mut() {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| row[k + 1 + t] * vt)
                .sum();
            for (t, vt) in v.iter().enumerate() {
                row[k + 1 + t] -= dot * vt.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[i][k] = zero();
        }
    }
}

/// Both eigenvalues of `[[a, b], [c, d]]`.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_gap = (a - d) * 0.5;
    let disc = (half_gap * half_gap + b * c).sqrt();
    let mid = (a + d) * 0.5;
    (mid + disc, mid - disc)
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, zero());
    }
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

fn hessenberg_qr(h: &mut Rows) -> Result<Vec<Complex64>> {
    let n = h.len();
    let mut values = vec![zero(); n];
    let scale = h.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(values);
    }
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64);

    let mut hi = n - 1;
    let mut sweeps = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            values[0] = h[0][0];
            break;
        }
        // locate the start of the unreduced block ending at `hi`
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let mut diag = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= eps * diag || sub <= eps * scale || sub <= small {
                h[lo][lo - 1] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = h[hi][hi];
            hi -= 1;
            sweeps = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]);
            values[lo] = l1;
            values[hi] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        total += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE || total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(GcircError::OracleFailure(format!(
                "QR iteration did not converge (active block {lo}..={hi})"
            )));
        }

        let shift = if sweeps % EXCEPTIONAL_EVERY == 0 {
            // rotate off the real axis by an irrational angle
            let mag = h[hi][hi - 1].norm() + h[hi - 1][hi - 1].norm().max(scale * eps);
            h[hi][hi] + Complex64::from_polar(0.75 * mag, 1.0 + sweeps as f64 * 0.618)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };

        qr_sweep(h, lo, hi, shift);
    }
    Ok(values)
}

/// One explicitly shifted QR step `H - sI = QR, H <- RQ + sI` on `lo..=hi`.
fn qr_sweep(h: &mut Rows, lo: usize, hi: usize, shift: Complex64) {
    for k in lo..=hi {
        h[k][k] -= shift;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[k][k], h[k + 1][k]);
        for j in k..=hi {
            let x = h[k][j];
            let y = h[k + 1][j];
            h[k][j] = x * c + s * y;
            h[k + 1][j] = -s.conj() * x + y * c;
        }
        h[k + 1][k] = zero();
        rots.push((c, s));
    }
    for (offset, &(c, s)) in rots.iter().enumerate() {
        let k = lo + offset;
        let last = (k + 2).min(hi);
        for row in h.iter_mut().take(last + 1).skip(lo) {
            let x = row[k];
            let y = row[k + 1];
            row[k] = x * c + y * s.conj();
            row[k + 1] = -x * s + y * c;
        }
    }
    for k in lo..=hi {
        h[k][k] += shift;
    }
}

/// Relative residual of the best eigenvector estimate for `lambda`.
fn residual(m: &DenseMatrix, lambda: Complex64, norm: f64) -> f64 {
    let n = m.rows();
    if norm == 0.0 {
        return lambda.norm();
    }
    // perturb the shift slightly so the LU stays finite
    let delta = norm * 1e-13;
    let shifted = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            m[(i, j)] - lambda - delta
        } else {
            m[(i, j)]
        }
    });
    let lu = Lu::factor(&shifted);
    let mut best = f64::INFINITY;
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * ((i * 7) % 5) as f64))
        .collect();
    for _ in 0..4 {
        let mut w = lu.solve(&v);
        let wn: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !wn.is_finite() || wn == 0.0 {
            break;
        }
        for z in &mut w {
            *z /= wn;
        }
        let mv = m.mul_vec(&w);
        let r: f64 = mv
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / norm;
        best = best.min(r);
        if best < 1e-14 {
            break;
        }
        v = w;
    }
    best
}

struct Lu {
    lu: Rows,
    piv: Vec<usize>,
}

impl Lu {
    fn factor(m: &DenseMatrix) -> Self {
        let n = m.rows();
        let mut lu = to_rows(m);
        let mut piv: Vec<usize> = (0..n).collect();
        let tiny = m.frobenius_norm() * f64::EPSILON;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| lu[a][k].norm().total_cmp(&lu[b][k].norm()))
                .unwrap();
            lu.swap(k, p);
            piv.swap(k, p);
            if lu[k][k].norm() <= tiny {
                lu[k][k] = Complex64::new(tiny.max(f64::MIN_POSITIVE), 0.0);
            }
            let pivot = lu[k][k];
            for i in k + 1..n {
                let f = lu[i][k] / pivot;
                lu[i][k] = f;
                if f != zero() {
                    for j in k + 1..n {
                        let t = lu[k][j];
                        lu[i][j] -= f * t;
                    }
                }
            }
        }
        Lu { lu, piv }
    }

    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let mut x: Vec<Complex64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[i][j] * x[j];
                x[i] -= t;
            }
            x[i] /= self.lu[i][i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::spectra_match;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let s = dense_eigen_oracle(&DenseMatrix::identity(4)).unwrap();
        assert_eq!(s.values().len(), 4);
        for z in s.values() {
            assert!((z - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn triangular_and_zero() {
        let m = DenseMatrix::from_real_rows(&[
            vec![2.0, 1.0, 5.0],
            vec![0.0, -3.0, 4.0],
            vec![0.0, 0.0, 7.0],
        ])
        .unwrap();
        let s = dense_eigen_oracle(&m).unwrap();
        let want = Spectrum::from_reals(&[2.0, -3.0, 7.0]);
        assert!(spectra_match(&s, &want, 1e-12).unwrap().matched);
        let z = dense_eigen_oracle(&DenseMatrix::zeros(3, 3)).unwrap();
        assert!(z.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn rotation_has_complex_pair() {
        let m = DenseMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let s = dense_eigen_oracle(&m).unwrap();
        let want = Spectrum::new(vec![c(0.0, 1.0), c(0.0, -1.0)], 0.0);
        assert!(spectra_match(&s, &want, 1e-12).unwrap().matched);
    }

    #[test]
    fn cyclic_permutation_gives_roots_of_unity() {
        for n in 2..=24usize {
            let image: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let p = crate::perm::cycle_decomposition(&image)
                .unwrap()
                .to_matrix();
            let s = dense_eigen_oracle(&p).unwrap();
            let want = Spectrum::new(
                (0..n)
                    .map(|k| {
                        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
                    })
                    .collect(),
                0.0,
            );
            let rep = spectra_match(&s, &want, 1e-9).unwrap();
            assert!(rep.matched, "n = {n}, max residual {}", rep.max_distance);
        }
    }

    #[test]
    fn companion_matrix_roots() {
        // x^3 - 6x^2 + 11x - 6 = (x-1)(x-2)(x-3)
        let m = DenseMatrix::from_real_rows(&[
            vec![6.0, -11.0, 6.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        let s = dense_eigen_oracle(&m).unwrap();
        assert!(
            spectra_match(&s, &Spectrum::from_reals(&[1.0, 2.0, 3.0]), 1e-10)
                .unwrap()
                .matched
        );
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            dense_eigen_oracle(&DenseMatrix::zeros(2, 3)),
            Err(GcircError::Domain(_))
        ));
        assert!(dense_eigen_oracle(&DenseMatrix::zeros(MAX_ORDER + 1, MAX_ORDER + 1)).is_err());
    }

    #[test]
    fn residuals_are_reported() {
        let m = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let r = dense_eigen_oracle_with_residuals(&m).unwrap();
        assert_eq!(r.residuals.len(), 2);
        assert!(r.max_residual() < 1e-12);
        // trace and determinant
        let vals = r.spectrum.values();
        assert!((vals[0] + vals[1] - c(5.0, 0.0)).norm() < 1e-12);
        assert!((vals[0] * vals[1] - c(-2.0, 0.0)).norm() < 1e-12);
    }
}
