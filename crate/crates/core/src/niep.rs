//! Real g-circulant matrices with prescribed spectrum
//! `(beta1, beta2, beta2*phi, ..., beta2*phi^(p-2))`, `phi = exp(2*pi*i/(p-1))`.
//!
//! The circulant factor `C` has eigenvalues `(beta1, beta2*w, ..., beta2*w^(p-1))`
//! with `w = exp(2*pi*i/p)`, which inverts to the closed form
//! `c_2 = (beta1 + (p-1)*beta2)/p` and `c_j = (beta1 - beta2)/p` otherwise.
//! `A = Q_g * C` is then nonnegative exactly when `beta1 >= beta2 >= 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};
use crate::matcore::{root_of_unity, GCirculant};
use crate::numtheory::{require_generator, require_prime};
use crate::oracle::dense_eigen_oracle;
use crate::spectra::{spectra_match, Spectrum, DEFAULT_TOL};

/// Entries at or above `-NONNEG_TOL` count as nonnegative.
pub const NONNEG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TargetRepr", into = "TargetRepr")]
pub struct TargetList {
    beta1: f64,
    beta2: f64,
    p: u64,
    g: u64,
}

#[derive(Serialize, Deserialize)]
struct TargetRepr {
    beta1: f64,
    beta2: f64,
    p: u64,
    g: i64,
}

impl TryFrom<TargetRepr> for TargetList {
    type Error = GcircError;

    fn try_from(r: TargetRepr) -> Result<Self> {
        TargetList::new(r.beta1, r.beta2, r.p, r.g)
    }
}

impl From<TargetList> for TargetRepr {
    fn from(t: TargetList) -> Self {
        TargetRepr {
            beta1: t.beta1,
            beta2: t.beta2,
            p: t.p,
            g: t.g as i64,
        }
    }
}

impl TargetList {
    /// Requires an odd prime `p`, a generator `g` of `U(Z/pZ)` and `beta2 >= 0`.
    pub fn new(beta1: f64, beta2: f64, p: u64, g: i64) -> Result<Self> {
        if !beta1.is_finite() || !beta2.is_finite() {
            return Err(GcircError::domain("targets must be finite"));
        }
        if beta2 < 0.0 {
            return Err(GcircError::domain(format!(
                "beta2 must be >= 0, got {beta2}"
            )));
        }
        require_prime(p)?;
        if p < 3 {
            return Err(GcircError::domain("p must be an odd prime"));
        }
        let g = require_generator(g, p)?;
        Ok(TargetList { beta1, beta2, p, g })
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> u64 {
        self.g
    }
}

/// `(beta1, beta2, beta2*phi, ..., beta2*phi^(p-2))`.
pub fn target_spectrum(t: &TargetList) -> Spectrum {
    let m = (t.p - 1) as usize;
    let mut values = Vec::with_capacity(t.p as usize);
    values.push(Complex64::new(t.beta1, 0.0));
    values.extend((0..m).map(|j| root_of_unity(j as i64, m) * t.beta2));
    Spectrum::new(values, DEFAULT_TOL)
}

/// `(beta1, beta2*w, beta2*w^2, ..., beta2*w^(p-1))`, `w = exp(2*pi*i/p)`.
pub fn auxiliary_list(t: &TargetList) -> Vec<Complex64> {
    let p = t.p as usize;
    let mut out = Vec::with_capacity(p);
    out.push(Complex64::new(t.beta1, 0.0));
    out.extend((1..p).map(|k| root_of_unity(k as i64, p) * t.beta2));
    out
}

/// First row of the circulant factor, from the closed form.
pub fn closed_form_row(beta1: f64, beta2: f64, p: usize) -> Vec<f64> {
    let off = (beta1 - beta2) / p as f64;
    let hot = (beta1 + (p as f64 - 1.0) * beta2) / p as f64;
    let mut row = vec![off; p];
    row[1] = hot;
    row
}

/// `beta1 >= beta2 >= 0`.
pub fn check_realizability(beta1: f64, beta2: f64) -> bool {
    beta1 >= beta2 && beta2 >= 0.0
}

/// Position and value of a negative matrix entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntryWitness {
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationReport {
    pub target: TargetList,
    pub circulant_row: Vec<f64>,
    pub matrix: GCirculant,
    pub nonnegative: bool,
    pub min_entry: f64,
    pub negative_witness: Option<EntryWitness>,
    /// Bottleneck matching distance between the oracle spectrum of the
    /// dense matrix and [`target_spectrum`].
    pub spectrum_residual: f64,
}

impl RealizationReport {
    pub fn spectrum_matches(&self, tol: f64) -> bool {
        self.spectrum_residual <= tol
    }
}

/// Builds `A = Q_g * C` for the target list and verifies its spectrum with
/// the dense oracle. Always returns a matrix; nonnegativity is a verdict.
pub fn realize(t: &TargetList) -> Result<RealizationReport> {
    let p = t.p as usize;
    let row = closed_form_row(t.beta1, t.beta2, p);
    let matrix = GCirculant::from_real(&row, t.g as i64)?;
    let dense = matrix.to_dense();

    let (r, c, min_entry) = dense.min_real_entry();
    let nonnegative = min_entry >= -NONNEG_TOL;
    let negative_witness = (!nonnegative).then_some(EntryWitness {
        row: r,
        col: c,
        value: min_entry,
    });

    let oracle = dense_eigen_oracle(&dense)?;
    let spectrum_residual =
        spectra_match(&oracle, &target_spectrum(t), f64::INFINITY)?.max_distance;

    Ok(RealizationReport {
        target: *t,
        circulant_row: row,
        matrix,
        nonnegative,
        min_entry,
        negative_witness,
        spectrum_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{circulant_from_eigenvalues, has_conjugate_pairing};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn target_validation() {
        assert!(TargetList::new(6.0, 5.0, 7, 3).is_ok());
        assert_eq!(
            TargetList::new(6.0, 5.0, 9, 2),
            Err(GcircError::NotPrime(9))
        );
        assert_eq!(
            TargetList::new(6.0, 5.0, 7, 2),
            Err(GcircError::NotGenerator { g: 2, p: 7 })
        );
        assert!(TargetList::new(6.0, -1.0, 7, 3).is_err());
        assert!(TargetList::new(6.0, 1.0, 2, 1).is_err());
        assert_eq!(TargetList::new(6.0, 5.0, 7, -4).unwrap().g(), 3);
    }

    #[test]
    fn target_spectrum_order_seven() {
        let t = TargetList::new(6.0, 5.0, 7, 3).unwrap();
        let s = target_spectrum(&t);
        let h = 5.0 * 3f64.sqrt() / 2.0;
        let printed = Spectrum::new(
            vec![
                c(6.0, 0.0),
                c(5.0, 0.0),
                c(-5.0, 0.0),
                c(2.5, 4.33),
                c(2.5, -4.33),
                c(-2.5, 4.33),
                c(-2.5, -4.33),
            ],
            0.0,
        );
        assert!(spectra_match(&s, &printed, 5e-3).unwrap().matched);
        assert!((s.values()[2] - c(2.5, h)).norm() < 1e-12);
        assert!((s.values()[2] - crate::spectra::phi(7) * 5.0).norm() < 1e-12);
        let sum: Complex64 = s.values().iter().sum();
        assert!((sum - c(6.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_beta2_degenerates() {
        let t = TargetList::new(3.0, 0.0, 5, 2).unwrap();
        let s = target_spectrum(&t);
        assert_eq!(s.values()[0], c(3.0, 0.0));
        assert!(s.values()[1..].iter().all(|z| z.norm() == 0.0));
        let aux = auxiliary_list(&t);
        assert!(aux[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn auxiliary_list_pairs_up() {
        let t = TargetList::new(6.0, 5.0, 7, 3).unwrap();
        let aux = auxiliary_list(&t);
        assert_eq!(aux.len(), 7);
        for k in 1..7 {
            assert!((aux[k] - aux[7 - k].conj()).norm() < 1e-12);
            assert!((aux[k] - root_of_unity(k as i64, 7) * 5.0).norm() < 1e-15);
        }
        assert!(has_conjugate_pairing(&aux, 1e-12));
    }

    #[test]
    fn closed_form_agrees_with_inverse_dft() {
        for (b1, b2, p, g) in [
            (6.0, 5.0, 7u64, 3i64),
            (1.0, 2.0, 7, 5),
            (-2.0, 0.5, 11, 2),
            (4.0, 4.0, 13, 6),
        ] {
            let t = TargetList::new(b1, b2, p, g).unwrap();
            let via_dft = circulant_from_eigenvalues(&auxiliary_list(&t)).unwrap();
            let closed = closed_form_row(b1, b2, p as usize);
            for (z, x) in via_dft.iter().zip(&closed) {
                assert!((z - c(*x, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn realize_order_seven() {
        let t = TargetList::new(6.0, 5.0, 7, 3).unwrap();
        let rep = realize(&t).unwrap();
        let (a, b) = (1.0 / 7.0, 36.0 / 7.0);
        assert_eq!(rep.circulant_row, vec![a, b, a, a, a, a, a]);
        assert!((a - 0.1429).abs() < 5e-5 && (b - 5.1429).abs() < 5e-5);
        assert!(rep.nonnegative);
        assert!(rep.negative_witness.is_none());
        assert!(rep.spectrum_residual < 1e-8);
        // position of b in each row of the displayed 3-circulant (1-based)
        let hot = [2usize, 5, 1, 4, 7, 3, 6];
        let dense = rep.matrix.to_dense();
        for (i, &h) in hot.iter().enumerate() {
            for j in 0..7 {
                let want = if j + 1 == h { b } else { a };
                assert_eq!(dense[(i, j)].re, want);
            }
        }
    }

    #[test]
    fn equal_betas_give_single_hot_rows() {
        let t = TargetList::new(5.0, 5.0, 7, 3).unwrap();
        let rep = realize(&t).unwrap();
        assert_eq!(rep.circulant_row, vec![0.0, 5.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(rep.nonnegative);
        assert!(rep.spectrum_residual < 1e-8);
        let z = realize(&TargetList::new(0.0, 0.0, 5, 3).unwrap()).unwrap();
        assert!(z.matrix.row().iter().all(|v| v.norm() == 0.0));
        assert!(z.spectrum_residual == 0.0);
    }

    #[test]
    fn infeasible_pair_is_reported() {
        assert!(check_realizability(6.0, 5.0));
        assert!(check_realizability(5.0, 5.0));
        assert!(!check_realizability(1.0, 2.0));
        assert!(!check_realizability(1.0, -0.5));
        let rep = realize(&TargetList::new(1.0, 2.0, 7, 3).unwrap()).unwrap();
        assert!(!rep.nonnegative);
        let w = rep.negative_witness.unwrap();
        assert!((w.value - (1.0 - 2.0) / 7.0).abs() < 1e-15);
        assert!(rep.spectrum_residual < 1e-8);
    }

    #[test]
    fn realized_row_sums_and_trace() {
        let t = TargetList::new(3.7, 1.2, 11, 7).unwrap();
        let dense = realize(&t).unwrap().matrix.to_dense();
        assert!((dense.trace().re - 3.7).abs() < 1e-10);
        for i in 0..11 {
            let s: Complex64 = dense.row(i).iter().sum();
            assert!((s.re - 3.7).abs() < 1e-10);
        }
    }

    #[test]
    fn report_json_shape() {
        let rep = realize(&TargetList::new(6.0, 5.0, 7, 3).unwrap()).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["target"]["p"], 7);
        assert_eq!(v["matrix"]["n"], 7);
        assert_eq!(v["matrix"]["row"][1][0], 36.0 / 7.0);
        assert!(v["negative_witness"].is_null());
    }
}
