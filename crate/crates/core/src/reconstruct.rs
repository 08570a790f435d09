//! Recovering a g-circulant from its diagonal.
//!
//! For prime `n` and a cyclic generator `g`, the diagonal entry at position
//! `l` (0-based) is `row[l*(1-g) mod n]`, so the diagonal is the first row
//! permuted by `Q_{1-g}`; inverting that permutation recovers the row.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};
use crate::matcore::GCirculant;
use crate::numtheory::{reduce, require_generator, require_prime};

/// Diagonal of a g-circulant with at most one unknown entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiagonalRepr", into = "DiagonalRepr")]
pub struct DiagonalVector {
    n: usize,
    g: usize,
    values: Vec<Option<Complex64>>,
}

#[derive(Serialize, Deserialize)]
struct DiagonalRepr {
    n: usize,
    g: i64,
    #[serde(with = "crate::json::option_complex_vec")]
    diagonal: Vec<Option<Complex64>>,
}

impl TryFrom<DiagonalRepr> for DiagonalVector {
    type Error = GcircError;

    fn try_from(r: DiagonalRepr) -> Result<Self> {
        if r.n != r.diagonal.len() {
            return Err(GcircError::domain(format!(
                "n = {} but the diagonal has {} entries",
                r.n,
                r.diagonal.len()
            )));
        }
        DiagonalVector::new(r.diagonal, r.g)
    }
}

impl From<DiagonalVector> for DiagonalRepr {
    fn from(d: DiagonalVector) -> Self {
        DiagonalRepr {
            n: d.n,
            g: d.g as i64,
            diagonal: d.values,
        }
    }
}

impl DiagonalVector {
    /// `n = values.len()` must be prime and `g` a cyclic generator mod `n`
    /// other than `1` (the diagonal of a plain circulant is constant).
    pub fn new(values: Vec<Option<Complex64>>, g: i64) -> Result<Self> {
        let n = values.len();
        require_prime(n as u64)?;
        let g = require_generator(g, n as u64)? as usize;
        if g == 1 {
            return Err(GcircError::domain(
                "for g = 1 the diagonal does not determine the first row",
            ));
        }
        let unknown = values.iter().filter(|v| v.is_none()).count();
        if unknown > 1 {
            return Err(GcircError::domain(format!(
                "at most one diagonal entry may be unknown, got {unknown}"
            )));
        }
        Ok(DiagonalVector { n, g, values })
    }

    pub fn known(values: &[Complex64], g: i64) -> Result<Self> {
        Self::new(values.iter().copied().map(Some).collect(), g)
    }

    pub fn from_real(values: &[f64], g: i64) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&x| Some(Complex64::new(x, 0.0)))
                .collect(),
            g,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn values(&self) -> &[Option<Complex64>] {
        &self.values
    }

    pub fn unknown_index(&self) -> Option<usize> {
        self.values.iter().position(Option::is_none)
    }
}

/// Index into the first row of the diagonal entry at `l`.
fn diagonal_source(l: usize, n: usize, g: usize) -> usize {
    reduce(l as i64 * (1 - g as i64), n as u64) as usize
}

/// `A[l][l]` for every `l`.
pub fn diagonal_of(a: &GCirculant) -> Vec<Complex64> {
    let (n, g) = (a.n(), a.g());
    (0..n).map(|l| a.row()[diagonal_source(l, n, g)]).collect()
}

pub fn first_row_from_diagonal(d: &DiagonalVector) -> Result<GCirculant> {
    let (n, g) = (d.n, d.g);
    let mut row = vec![None; n];
    for (l, v) in d.values.iter().enumerate() {
        let v = v.ok_or_else(|| GcircError::domain(format!("diagonal entry {l} is unknown")))?;
        row[diagonal_source(l, n, g)] = Some(v);
    }
    let row: Vec<Complex64> = row
        .into_iter()
        .map(|v| v.expect("l -> l*(1-g) is a bijection for prime n and g != 1"))
        .collect();
    GCirculant::new(row, g as i64)
}

/// Fills the unknown diagonal entry so the trace equals `beta1`, then
/// reconstructs the matrix.
pub fn complete_with_perron(d: &DiagonalVector, beta1: f64) -> Result<GCirculant> {
    let idx = d.unknown_index().ok_or_else(|| {
        GcircError::domain("complete_with_perron needs exactly one unknown entry, got none")
    })?;
    let known: Complex64 = d.values.iter().flatten().sum();
    let mut values = d.values.clone();
    values[idx] = Some(Complex64::new(beta1, 0.0) - known);
    first_row_from_diagonal(&DiagonalVector::new(values, d.g as i64)?)
}
