//! g-circulant, `Q_g` and DFT matrices.
//!
//! Indices are 0-based throughout. The 1-based entry rule
//! `a_{ij} = a_{j-(i-1)g}` becomes `A[i][j] = row[(j - i*g) mod n]`, and the
//! shift recurrence `a_{ij} = a_{i+1, j+g}` becomes
//! `A[i][j] = A[(i+1) mod n][(j+g) mod n]`. Those two lines are the only
//! place the translation happens.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};
use crate::matrix::DenseMatrix;
use crate::numtheory::{gcd, reduce, require_prime};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Compressed form of `g-circ(row)`: order, reduced shift and first row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GCirculantRepr", into = "GCirculantRepr")]
pub struct GCirculant {
    g: usize,
    row: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct GCirculantRepr {
    n: usize,
    g: i64,
    #[serde(with = "crate::json::complex_vec")]
    row: Vec<Complex64>,
}

impl TryFrom<GCirculantRepr> for GCirculant {
    type Error = GcircError;

    fn try_from(r: GCirculantRepr) -> Result<Self> {
        if r.n != r.row.len() {
            return Err(GcircError::domain(format!(
                "n = {} but the row has {} entries",
                r.n,
                r.row.len()
            )));
        }
        GCirculant::new(r.row, r.g)
    }
}

impl From<GCirculant> for GCirculantRepr {
    fn from(a: GCirculant) -> Self {
        GCirculantRepr {
            n: a.row.len(),
            g: a.g as i64,
            row: a.row,
        }
    }
}

impl GCirculant {
    /// `g` may be any integer; it is stored reduced mod `n`.
    pub fn new(row: Vec<Complex64>, g: i64) -> Result<Self> {
        if row.is_empty() {
            return Err(GcircError::domain("first row must be nonempty"));
        }
        let g = reduce(g, row.len() as u64) as usize;
        Ok(GCirculant { g, row })
    }

    pub fn from_real(row: &[f64], g: i64) -> Result<Self> {
        Self::new(row.iter().map(|&x| Complex64::new(x, 0.0)).collect(), g)
    }

    /// The classical circulant (`g = 1`).
    pub fn circulant(row: Vec<Complex64>) -> Result<Self> {
        Self::new(row, 1)
    }

    pub fn n(&self) -> usize {
        self.row.len()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn row(&self) -> &[Complex64] {
        &self.row
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let n = self.n();
        self.row[(j + n - (i * self.g) % n) % n]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    /// Largest imaginary part in the first row.
    pub fn max_imag_abs(&self) -> f64 {
        self.row.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

pub fn build_g_circulant(row: &[Complex64], g: i64) -> Result<DenseMatrix> {
    Ok(GCirculant::new(row.to_vec(), g)?.to_dense())
}

/// `Q_g = g-circ(1, 0, ..., 0)`: row `i` has its `1` in column `i*g mod n`.
///
/// This is a permutation matrix only when `gcd(n, g) = 1`; otherwise it is
/// still a 0/1 matrix but some columns are empty.
pub fn build_qg(n: usize, g: i64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(GcircError::domain("order must be positive"));
    }
    let mut row = vec![ZERO; n];
    row[0] = ONE;
    build_g_circulant(&row, g)
}

/// Checks `A[i][j] = A[i+1][j+g]` (indices mod n) exactly.
pub fn is_g_circulant(m: &DenseMatrix, g: i64) -> Result<bool> {
    if !m.is_square() {
        return Err(GcircError::domain(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let g = reduce(g, n as u64) as usize;
    Ok((0..n).all(|i| (0..n).all(|j| m[(i, j)] == m[((i + 1) % n, (j + g) % n)])))
}

/// `exp(2*pi*i*k/n)` with `k` reduced first so large exponents stay accurate.
pub fn root_of_unity(k: i64, n: usize) -> Complex64 {
    let k = reduce(k, n as u64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / n as f64)
}

/// Unitary DFT matrix with entries `w^(k*l) / sqrt(n)`, `w = exp(2*pi*i/n)`.
pub fn dft_matrix(n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(GcircError::domain("order must be positive"));
    }
    let s = 1.0 / (n as f64).sqrt();
    Ok(DenseMatrix::from_fn(n, n, |k, l| {
        root_of_unity((k * l % n) as i64, n) * s
    }))
}

/// Splits `A = Q_g * C` with `C` the circulant sharing `A`'s first row.
pub fn factor_qc(a: &GCirculant) -> Result<(DenseMatrix, GCirculant)> {
    let qg = build_qg(a.n(), a.g() as i64)?;
    let c = GCirculant::circulant(a.row().to_vec())?;
    Ok((qg, c))
}

/// For prime `n` and `1 < g < n`, every g-circulant is symmetric exactly when
/// `g = n - 1`.
pub fn is_symmetric_gcirc(n: u64, g: i64) -> Result<bool> {
    require_prime(n)?;
    if g <= 1 || g >= n as i64 {
        return Err(GcircError::domain(format!(
            "symmetry criterion needs 1 < g < n, got g = {g}, n = {n}"
        )));
    }
    Ok(g as u64 == n - 1)
}

/// `true` when `Q_g` permutes the indices, i.e. `gcd(n, g) = 1`.
pub fn qg_is_permutation(n: usize, g: i64) -> Result<bool> {
    if n == 0 {
        return Err(GcircError::domain("order must be positive"));
    }
    Ok(n == 1 || gcd(reduce(g, n as u64), n as u64)? == 1)
}
