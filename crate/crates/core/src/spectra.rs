//! Forward spectral maps and multiset comparison of spectra.
//!
//! Circulant eigenvalues are `lambda_k = sum_l c_l w^(k*l)` with
//! `w = exp(2*pi*i/n)` (0-based `k`, `l`), so `lambda_0` is the row sum.
//! For prime `n` and a cyclic generator `g`, `Q_g * circ(c)` has eigenvalues
//! `lambda_0` together with the `(n-1)`-th roots of `lambda_1 * ... * lambda_{n-1}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};
use crate::matcore::root_of_unity;
use crate::numtheory::{require_generator, require_prime};
use crate::perm::PDMatrix;

/// Default absolute tolerance for spectrum comparisons.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Tolerance for comparisons against values printed to four decimals.
pub const PRINTED_TOL: f64 = 5e-4;

/// Multiset of eigenvalues with the tolerance used to compare it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    #[serde(with = "crate::json::complex_vec")]
    values: Vec<Complex64>,
    tol: f64,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>, tol: f64) -> Self {
        assert!(
            tol >= 0.0 && tol.is_finite(),
            "tolerance must be nonnegative"
        );
        Spectrum { values, tol }
    }

    pub fn from_reals(values: &[f64]) -> Self {
        Self::new(
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            DEFAULT_TOL,
        )
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        assert!(
            tol >= 0.0 && tol.is_finite(),
            "tolerance must be nonnegative"
        );
        self.tol = tol;
        self
    }

    /// Multiset union.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a Spectrum>, tol: f64) -> Spectrum {
        let values = parts
            .into_iter()
            .flat_map(|s| s.values.iter().copied())
            .collect();
        Spectrum::new(values, tol)
    }

    /// Order-free equality within `max(self.tol, other.tol)`.
    pub fn approx_eq(&self, other: &Spectrum) -> bool {
        spectra_match(self, other, self.tol.max(other.tol)).is_ok_and(|r| r.matched)
    }
}

/// An eigenvalue list in index order obeying the pairing of a real circulant:
/// `lambda_0` real and `lambda_{n-k} = conj(lambda_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateSymmetricList {
    values: Vec<Complex64>,
}

impl ConjugateSymmetricList {
    pub fn new(values: Vec<Complex64>, tol: f64) -> Result<Self> {
        if let Some(msg) = pairing_violation(&values, tol) {
            return Err(GcircError::domain(msg));
        }
        Ok(ConjugateSymmetricList { values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Describes the first pairing violation, if any. The checked range is
/// `1 <= k <= floor((n-1)/2)` plus the self-paired middle entry for even `n`.
fn pairing_violation(values: &[Complex64], tol: f64) -> Option<String> {
    let n = values.len();
    if n == 0 {
        return Some("empty eigenvalue list".into());
    }
    if values[0].im.abs() > tol {
        return Some(format!("lambda_1 = {} is not real", values[0]));
    }
    for k in 1..=(n - 1) / 2 {
        let (a, b) = (values[k], values[n - k]);
        if (a.conj() - b).norm() > tol {
            return Some(format!(
                "lambda_{} = {b} is not the conjugate of lambda_{} = {a}",
                n - k + 1,
                k + 1
            ));
        }
    }
    if n % 2 == 0 && values[n / 2].im.abs() > tol {
        return Some(format!(
            "lambda_{} = {} is not real",
            n / 2 + 1,
            values[n / 2]
        ));
    }
    None
}

/// `true` when `values` pair up as the eigenvalues of a real circulant.
pub fn has_conjugate_pairing(values: &[Complex64], tol: f64) -> bool {
    pairing_violation(values, tol).is_none()
}

/// Eigenvalues of `circ(row)` in index order. Direct O(n^2) DFT.
pub fn circulant_eigenvalues(row: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = row.len();
    if n == 0 {
        return Err(GcircError::domain("row must be nonempty"));
    }
    Ok((0..n)
        .map(|k| {
            row.iter()
                .enumerate()
                .map(|(l, &c)| c * root_of_unity((k * l % n) as i64, n))
                .sum()
        })
        .collect())
}

/// Inverse of [`circulant_eigenvalues`]: `c_k = (1/n) sum_l lambda_l w^(-k*l)`.
pub fn circulant_from_eigenvalues(lambdas: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = lambdas.len();
    if n == 0 {
        return Err(GcircError::domain("eigenvalue list must be nonempty"));
    }
    let inv_n = 1.0 / n as f64;
    Ok((0..n)
        .map(|k| {
            lambdas
                .iter()
                .enumerate()
                .map(|(l, &lam)| lam * root_of_unity(-((k * l % n) as i64), n))
                .sum::<Complex64>()
                * inv_n
        })
        .collect())
}

/// `exp(2*pi*i/(p-1))`, the primitive `(p-1)`-th root used by the closed forms.
pub fn phi(p: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / (p - 1) as f64)
}

/// Closed-form spectrum of `Q_g * C` from the eigenvalues of the circulant `C`.
///
/// Returns `(lambda_1, r, r*phi, ..., r*phi^(n-2))` where `r` is the positive
/// real `(n-1)`-th root of `lambda_2 * ... * lambda_n`. The product must be
/// a nonnegative real; for a real `C` of odd prime order it is a product of
/// squared moduli. For `n = 2` the single root of a negative real product is
/// the product itself, so that case is returned as is.
pub fn g_circulant_spectrum(c_eigs: &[Complex64], n: u64, g: i64) -> Result<Spectrum> {
    if c_eigs.len() as u64 != n {
        return Err(GcircError::domain(format!(
            "expected {n} circulant eigenvalues, got {}",
            c_eigs.len()
        )));
    }
    require_prime(n)?;
    require_generator(g, n)?;

    let tail = &c_eigs[1..];
    let scale = c_eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let negligible = scale * 1e-13;

    let mut out = Vec::with_capacity(n as usize);
    out.push(c_eigs[0]);
    if n == 2 {
        let z = tail[0];
        if z.im.abs() > 1e-9 * z.norm().max(1.0) {
            return Err(GcircError::domain(format!(
                "eigenvalue product {z} is not real"
            )));
        }
        out.push(Complex64::new(z.re, 0.0));
        return Ok(Spectrum::new(out, DEFAULT_TOL));
    }

    let radius = if tail.iter().any(|z| z.norm() <= negligible) {
        0.0
    } else {
        // product phase and log-modulus accumulated separately to avoid overflow
        let phase: Complex64 = tail.iter().map(|z| z / z.norm()).product();
        if (phase - Complex64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(GcircError::domain(format!(
                "product of the last {} circulant eigenvalues has phase {:.6} rad; \
                 the closed form needs a positive real product (is the circulant real?)",
                n - 1,
                phase.arg()
            )));
        }
        let log_mod: f64 = tail.iter().map(|z| z.norm().ln()).sum();
        (log_mod / (n - 1) as f64).exp()
    };

    for j in 0..(n - 1) as i64 {
        out.push(root_of_unity(j, (n - 1) as usize) * radius);
    }
    Ok(Spectrum::new(out, DEFAULT_TOL))
}

/// Spectrum of a monomial matrix: for each cycle of length `t` along which the
/// diagonal entries multiply to `q`, all `t` complex `t`-th roots of `q`.
pub fn pd_spectrum(pd: &PDMatrix) -> Spectrum {
    let mut out = Vec::with_capacity(pd.diag().len());
    for cycle in pd.perm().cycles() {
        let t = cycle.len();
        let prod: Complex64 = cycle.iter().map(|&i| pd.diag()[i]).product();
        let base = if t == 1 || prod.norm() == 0.0 {
            prod
        } else {
            Complex64::from_polar(prod.norm().powf(1.0 / t as f64), prod.arg() / t as f64)
        };
        for j in 0..t {
            out.push(base * root_of_unity(j as i64, t));
        }
    }
    Spectrum::new(out, DEFAULT_TOL)
}

/// Outcome of pairing two spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub matched: bool,
    pub tol: f64,
    /// Largest pair distance of the bottleneck-optimal pairing.
    pub max_distance: f64,
    /// `(index in a, index in b, distance)` sorted by index in `a`.
    pub pairs: Vec<(usize, usize, f64)>,
}

/// Pairs `a` with `b` so that the largest pair distance is as small as
/// possible, then reports whether it is within `tol`.
pub fn spectra_match(a: &Spectrum, b: &Spectrum, tol: f64) -> Result<MatchReport> {
    let (x, y) = (a.values(), b.values());
    if x.len() != y.len() {
        return Err(GcircError::CardinalityMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n == 0 {
        return Ok(MatchReport {
            matched: true,
            tol,
            max_distance: 0.0,
            pairs: Vec::new(),
        });
    }
    let dist: Vec<Vec<f64>> = x
        .iter()
        .map(|u| y.iter().map(|v| (u - v).norm()).collect())
        .collect();
    let mut levels: Vec<f64> = dist.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    // smallest threshold admitting a perfect matching
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut best =
        perfect_matching(&dist, levels[hi]).expect("complete graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(&dist, levels[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let pairs: Vec<(usize, usize, f64)> = best
        .iter()
        .enumerate()
        .map(|(i, &j)| (i, j, dist[i][j]))
        .collect();
    let max_distance = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    Ok(MatchReport {
        matched: max_distance <= tol,
        tol,
        max_distance,
        pairs,
    })
}

/// Kuhn's augmenting-path matching restricted to edges with `dist <= limit`.
/// Returns `match_of_left[i] = j` when every row can be matched.
fn perfect_matching(dist: &[Vec<f64>], limit: f64) -> Option<Vec<usize>> {
    let n = dist.len();
    let mut right_owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        dist: &[Vec<f64>],
        limit: f64,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..dist.len() {
            if dist[i][j] <= limit && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, dist, limit, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, limit, &mut seen, &mut right_owner) {
            return None;
        }
    }
    let mut left = vec![0; n];
    for (j, owner) in right_owner.iter().enumerate() {
        left[owner.expect("perfect matching")] = j;
    }
    Some(left)
}
