//! Block g-circulant matrices whose blocks are circulant.
//!
//! Symbols: `p` is the (prime) block-grid order with generator `g`, `n` is the
//! order of each circulant block, `w = exp(2*pi*i/n)` and
//! `phi = exp(2*pi*i/(p-1))`. Note that the scalar modules use `n` for the
//! matrix order; here the full matrix has order `n*p`.
//!
//! Block `(I, J)` of `g-circ(A_1, ..., A_p)` is `A_{(J - I*g) mod p}`. The
//! DFT across the block coefficients yields `n` g-circulants `S_k` of order
//! `p` whose spectra partition the spectrum of the block matrix; the inverse
//! DFT `L_k = (1/n) sum_l S_l w^(-k*l)` gives back the coefficient matrices,
//! and the block matrix is nonnegative iff every `L_k` is.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};
use crate::matcore::{dft_matrix, root_of_unity, GCirculant};
use crate::matrix::DenseMatrix;
use crate::niep::{closed_form_row, target_spectrum, TargetList, NONNEG_TOL};
use crate::numtheory::{require_generator, require_prime};
use crate::oracle::dense_eigen_oracle;
use crate::spectra::{
    circulant_eigenvalues, g_circulant_spectrum, spectra_match, Spectrum, DEFAULT_TOL,
};

/// Realness threshold for the `L_k` matrices.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockRepr", into = "BlockRepr")]
pub struct BlockGCirculant {
    p: usize,
    g: usize,
    n: usize,
    blocks: Vec<Vec<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    p: usize,
    g: i64,
    n: usize,
    #[serde(with = "crate::json::complex_vec_vec")]
    blocks: Vec<Vec<Complex64>>,
}

impl TryFrom<BlockRepr> for BlockGCirculant {
    type Error = GcircError;

    fn try_from(r: BlockRepr) -> Result<Self> {
        let b = BlockGCirculant::new(r.blocks, r.g)?;
        if b.p != r.p || b.n != r.n {
            return Err(GcircError::domain(format!(
                "declared p = {}, n = {} but blocks give p = {}, n = {}",
                r.p, r.n, b.p, b.n
            )));
        }
        Ok(b)
    }
}

impl From<BlockGCirculant> for BlockRepr {
    fn from(b: BlockGCirculant) -> Self {
        BlockRepr {
            p: b.p,
            g: b.g as i64,
            n: b.n,
            blocks: b.blocks,
        }
    }
}

impl BlockGCirculant {
    /// `blocks[k]` is the first row of the circulant block `A_{k+1}`.
    pub fn new(blocks: Vec<Vec<Complex64>>, g: i64) -> Result<Self> {
        let p = blocks.len();
        require_prime(p as u64)?;
        let g = require_generator(g, p as u64)? as usize;
        let n = blocks[0].len();
        if n == 0 || blocks.iter().any(|b| b.len() != n) {
            return Err(GcircError::domain(
                "all block rows must share a positive length",
            ));
        }
        Ok(BlockGCirculant { p, g, n, blocks })
    }

    pub fn from_real(blocks: &[Vec<f64>], g: i64) -> Result<Self> {
        Self::new(
            blocks
                .iter()
                .map(|b| b.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
            g,
        )
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<Complex64>] {
        &self.blocks
    }

    /// First-row coefficients of block `(i, j)`.
    pub fn block_row(&self, i: usize, j: usize) -> &[Complex64] {
        let p = self.p;
        &self.blocks[(j + p - (i * self.g) % p) % p]
    }
}

/// The dense `n*p x n*p` matrix.
pub fn assemble(b: &BlockGCirculant) -> DenseMatrix {
    let (p, n) = (b.p, b.n);
    let mut m = DenseMatrix::zeros(n * p, n * p);
    for bi in 0..p {
        for bj in 0..p {
            let coeffs = b.block_row(bi, bj);
            for u in 0..n {
                for v in 0..n {
                    m[(bi * n + u, bj * n + v)] = coeffs[(v + n - u) % n];
                }
            }
        }
    }
    m
}

/// `S_k = g-circ(lambda_k(A_1), ..., lambda_k(A_p))` for `k = 0..n`.
pub fn s_matrices(b: &BlockGCirculant) -> Vec<GCirculant> {
    let eigs: Vec<Vec<Complex64>> = b
        .blocks
        .iter()
        .map(|row| circulant_eigenvalues(row).expect("rows are nonempty"))
        .collect();
    (0..b.n)
        .map(|k| {
            let row = eigs.iter().map(|e| e[k]).collect();
            GCirculant::new(row, b.g as i64).expect("p >= 2")
        })
        .collect()
}

/// Union of the spectra of the `S_k`. The closed form is used for each `S_k`
/// whose hypotheses hold, the dense oracle otherwise.
pub fn block_spectrum(b: &BlockGCirculant) -> Result<Spectrum> {
    let mut parts = Vec::with_capacity(b.n);
    for s in s_matrices(b) {
        let eig = circulant_eigenvalues(s.row())?;
        let part = match g_circulant_spectrum(&eig, b.p as u64, b.g as i64) {
            Ok(closed) => closed,
            Err(_) => dense_eigen_oracle(&s.to_dense())?,
        };
        parts.push(part);
    }
    Ok(Spectrum::union(&parts, DEFAULT_TOL))
}

/// `L_k = (1/n) sum_l S_l w^(-k*l)`, summed in increasing `l`.
pub fn l_matrices(s: &[DenseMatrix]) -> Result<Vec<DenseMatrix>> {
    let first = s
        .first()
        .ok_or_else(|| GcircError::domain("need at least one S matrix"))?;
    let (r, c) = (first.rows(), first.cols());
    if s.iter().any(|m| m.rows() != r || m.cols() != c) {
        return Err(GcircError::domain("S matrices must share one shape"));
    }
    let n = s.len();
    let inv_n = 1.0 / n as f64;
    Ok((0..n)
        .map(|k| {
            let mut acc = vec![Complex64::new(0.0, 0.0); r * c];
            for (l, sl) in s.iter().enumerate() {
                let w = root_of_unity(-((k * l % n) as i64), n);
                for (a, z) in acc.iter_mut().zip(sl.entries()) {
                    *a += z * w;
                }
            }
            DenseMatrix::new(r, c, acc.into_iter().map(|z| z * inv_n).collect())
                .expect("shape preserved")
        })
        .collect())
}

/// Per-`k` spectral targets `(beta1_k, beta2_k)` for a block realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockTargetsRepr", into = "BlockTargetsRepr")]
pub struct BlockTargets {
    p: u64,
    g: u64,
    beta1: Vec<f64>,
    beta2: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct BlockTargetsRepr {
    p: u64,
    g: i64,
    beta1: Vec<f64>,
    beta2: Vec<f64>,
}

impl TryFrom<BlockTargetsRepr> for BlockTargets {
    type Error = GcircError;

    fn try_from(r: BlockTargetsRepr) -> Result<Self> {
        BlockTargets::new(r.beta1, r.beta2, r.p, r.g)
    }
}

impl From<BlockTargets> for BlockTargetsRepr {
    fn from(t: BlockTargets) -> Self {
        BlockTargetsRepr {
            p: t.p,
            g: t.g as i64,
            beta1: t.beta1,
            beta2: t.beta2,
        }
    }
}

impl BlockTargets {
    /// Checks `beta1[0] >= beta2[0] >= 0`, `beta2[k] >= 0`, and the pairing
    /// `beta[n-k] = beta[k]` for `1 <= k < n` that keeps the block matrix real.
    pub fn new(beta1: Vec<f64>, beta2: Vec<f64>, p: u64, g: i64) -> Result<Self> {
        let n = beta1.len();
        if n == 0 || beta2.len() != n {
            return Err(GcircError::domain(format!(
                "beta1 and beta2 must have the same positive length, got {} and {}",
                beta1.len(),
                beta2.len()
            )));
        }
        if beta1.iter().chain(&beta2).any(|x| !x.is_finite()) {
            return Err(GcircError::domain("targets must be finite"));
        }
        // validates p and g
        let first = TargetList::new(beta1[0], beta2[0], p, g)?;
        if beta1[0] < beta2[0] {
            return Err(GcircError::domain(format!(
                "need beta1_1 >= beta2_1, got {} < {}",
                beta1[0], beta2[0]
            )));
        }
        if let Some(k) = beta2.iter().position(|&b| b < 0.0) {
            return Err(GcircError::domain(format!(
                "beta2_{} = {} is negative",
                k + 1,
                beta2[k]
            )));
        }
        for k in 1..n {
            if beta1[n - k] != beta1[k] || beta2[n - k] != beta2[k] {
                return Err(GcircError::domain(format!(
                    "conjugate symmetry fails: (beta1, beta2) at k = {} is ({}, {}) but at k = {} is ({}, {})",
                    k + 1,
                    beta1[k],
                    beta2[k],
                    n - k + 1,
                    beta1[n - k],
                    beta2[n - k]
                )));
            }
        }
        Ok(BlockTargets {
            p,
            g: first.g(),
            beta1,
            beta2,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn n(&self) -> usize {
        self.beta1.len()
    }

    pub fn beta1(&self) -> &[f64] {
        &self.beta1
    }

    pub fn beta2(&self) -> &[f64] {
        &self.beta2
    }

    /// Union over `k` of `(beta1_k, beta2_k, beta2_k*phi, ..., beta2_k*phi^(p-2))`.
    pub fn target_set(&self) -> Spectrum {
        let parts: Vec<Spectrum> = (0..self.n())
            .map(|k| {
                let b1 = self.beta1[k];
                let b2 = self.beta2[k];
                let t = TargetList::new(b1, b2, self.p, self.g as i64)
                    .expect("validated at construction");
                target_spectrum(&t)
            })
            .collect();
        Spectrum::union(&parts, DEFAULT_TOL)
    }
}

/// A negative entry of some `L_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LWitness {
    pub k: usize,
    pub u: usize,
    pub v: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRealizationReport {
    pub targets: BlockTargets,
    pub s_matrices: Vec<GCirculant>,
    pub l_matrices: Vec<DenseMatrix>,
    pub nonnegative: bool,
    pub min_l_entry: f64,
    pub witness: Option<LWitness>,
    pub max_l_imag: f64,
    pub matrix: BlockGCirculant,
    pub min_entry: f64,
    /// Bottleneck matching distance between the oracle spectrum of the
    /// assembled matrix and the target set.
    pub spectrum_residual: f64,
}

impl BlockRealizationReport {
    pub fn spectrum_matches(&self, tol: f64) -> bool {
        self.spectrum_residual <= tol
    }
}

/// Builds `S_k` from the scalar closed form for every `k`, takes the inverse
/// DFT to get `L_k`, and assembles the block matrix whose block `(u, v)` has
/// first row `(L_1(u, v), ..., L_n(u, v))`.
///
/// The matrix is assembled whatever the verdict; `nonnegative` reports
/// whether every `L_k` is entrywise `>= -NONNEG_TOL`.
pub fn realize_block(t: &BlockTargets) -> Result<BlockRealizationReport> {
    let p = t.p as usize;
    let n = t.n();
    let s: Vec<GCirculant> = (0..n)
        .map(|k| GCirculant::from_real(&closed_form_row(t.beta1[k], t.beta2[k], p), t.g as i64))
        .collect::<Result<_>>()?;
    let dense_s: Vec<DenseMatrix> = s.iter().map(GCirculant::to_dense).collect();
    let l = l_matrices(&dense_s)?;

    let max_l_imag = l.iter().map(DenseMatrix::max_imag_abs).fold(0.0, f64::max);
    if max_l_imag > REAL_TOL {
        return Err(GcircError::domain(format!(
            "L matrices are not real (max imaginary part {max_l_imag:.3e})"
        )));
    }

    let mut witness: Option<LWitness> = None;
    for (k, lk) in l.iter().enumerate() {
        let (u, v, value) = lk.min_real_entry();
        if witness.is_none_or(|w| value < w.value) {
            witness = Some(LWitness { k, u, v, value });
        }
    }
    let lowest = witness.expect("n >= 1");
    let nonnegative = lowest.value >= -NONNEG_TOL;

    // L_k is g-circulant, so block (0, j) determines the whole block row
    let blocks: Vec<Vec<Complex64>> = (0..p)
        .map(|j| {
            (0..n)
                .map(|k| Complex64::new(l[k][(0, j)].re, 0.0))
                .collect()
        })
        .collect();
    let matrix = BlockGCirculant::new(blocks, t.g as i64)?;
    let dense = assemble(&matrix);
    let (_, _, min_entry) = dense.min_real_entry();

    let oracle = dense_eigen_oracle(&dense)?;
    let spectrum_residual = spectra_match(&oracle, &t.target_set(), f64::INFINITY)?.max_distance;

    Ok(BlockRealizationReport {
        targets: t.clone(),
        s_matrices: s,
        l_matrices: l,
        nonnegative,
        min_l_entry: lowest.value,
        witness: (!nonnegative).then_some(lowest),
        max_l_imag,
        matrix,
        min_entry,
        spectrum_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MConditionReport {
    pub nonnegative: bool,
    /// `p x n`: row 2 holds `beta1_k + (p-1) beta2_k`, the rest `beta1_k - beta2_k`.
    pub m: DenseMatrix,
    /// `G = (1/sqrt(n)) M F^*`.
    pub g_matrix: DenseMatrix,
    pub min_entry: f64,
}

/// Equivalent nonnegativity test computed from the targets alone.
///
/// `M` carries no `1/p` factor, so column `k` of `G` is `p` times the first
/// row of `L_k`. The sign pattern, and hence the verdict, is the same.
pub fn m_matrix_condition(t: &BlockTargets) -> Result<MConditionReport> {
    let p = t.p as usize;
    let n = t.n();
    let m = DenseMatrix::from_fn(p, n, |i, k| {
        let (b1, b2) = (t.beta1[k], t.beta2[k]);
        let v = if i == 1 {
            b1 + (p as f64 - 1.0) * b2
        } else {
            b1 - b2
        };
        Complex64::new(v, 0.0)
    });
    let f_adj = dft_matrix(n)?.adjoint();
    let g_matrix = m
        .try_mul(&f_adj)?
        .scale(Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let (_, _, min_entry) = g_matrix.min_real_entry();
    Ok(MConditionReport {
        nonnegative: min_entry >= -(p as f64) * NONNEG_TOL,
        m,
        g_matrix,
        min_entry,
    })
}
