//! Permutations with their cycle structure, and monomial (PD) matrices.
//!
//! A permutation `image` acts as the matrix with a `1` at `(i, image[i])`.
//! Under that convention `Q_g` is the permutation `i -> i*g mod n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GcircError, Result};
use crate::matrix::DenseMatrix;
use crate::numtheory::{gcd, reduce};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct PermSpec {
    image: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    n: usize,
    image: Vec<usize>,
    #[serde(default)]
    cycles: Vec<Vec<usize>>,
}

impl TryFrom<PermRepr> for PermSpec {
    type Error = GcircError;

    fn try_from(r: PermRepr) -> Result<Self> {
        if r.n != r.image.len() {
            return Err(GcircError::domain(
                "permutation order does not match image length",
            ));
        }
        cycle_decomposition(&r.image)
    }
}

impl From<PermSpec> for PermRepr {
    fn from(p: PermSpec) -> Self {
        PermRepr {
            n: p.image.len(),
            image: p.image,
            cycles: p.cycles,
        }
    }
}

impl PermSpec {
    pub fn identity(n: usize) -> Self {
        cycle_decomposition(&(0..n).collect::<Vec<_>>()).expect("identity is a bijection")
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// Cycles ordered by their smallest element, each starting there.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    pub fn inverse(&self) -> PermSpec {
        let mut inv = vec![0; self.n()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        cycle_decomposition(&inv).expect("inverse of a bijection")
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, &j) in self.image.iter().enumerate() {
            m[(i, j)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn is_primary(&self) -> bool {
        is_primary(self)
    }
}

/// Validates `image` as a bijection of `0..n` and splits it into cycles.
pub fn cycle_decomposition(image: &[usize]) -> Result<PermSpec> {
    let n = image.len();
    let mut seen = vec![false; n];
    for &j in image {
        if j >= n || seen[j] {
            return Err(GcircError::domain(format!(
                "image {image:?} is not a bijection of 0..{n}"
            )));
        }
        seen[j] = true;
    }
    let mut visited = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            cycle.push(k);
            k = image[k];
        }
        cycles.push(cycle);
    }
    Ok(PermSpec {
        image: image.to_vec(),
        cycles,
    })
}

/// A single cycle through every index.
pub fn is_primary(spec: &PermSpec) -> bool {
    spec.cycles.len() == 1 && spec.cycles[0].len() == spec.n()
}

fn require_coprime(n: usize, g: i64) -> Result<usize> {
    if n == 0 {
        return Err(GcircError::domain("order must be positive"));
    }
    let r = reduce(g, n as u64);
    if n > 1 && gcd(r, n as u64)? != 1 {
        return Err(GcircError::NotInvertible { g, n: n as u64 });
    }
    Ok(r as usize)
}

/// The permutation behind `Q_g`: `i -> i*g mod n`. Requires `gcd(n, g) = 1`.
pub fn qg_permutation(n: usize, g: i64) -> Result<PermSpec> {
    let g = require_coprime(n, g)?;
    let image: Vec<usize> = (0..n).map(|i| i * g % n).collect();
    cycle_decomposition(&image)
}

/// The block `W` of `Q_g = diag(1, W)`, as a permutation of `n - 1` points.
///
/// Point `k` of `W` is index `k + 1` of `Q_g`.
pub fn w_submatrix(n: usize, g: i64) -> Result<PermSpec> {
    if n < 2 {
        return Err(GcircError::domain("W needs order n >= 2"));
    }
    let g = require_coprime(n, g)?;
    let image: Vec<usize> = (1..n).map(|i| i * g % n - 1).collect();
    cycle_decomposition(&image)
}

/// A monomial matrix `P_perm * diag(diag)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PDMatrix {
    perm: PermSpec,
    #[serde(with = "crate::json::complex_vec")]
    diag: Vec<Complex64>,
}

impl PDMatrix {
    pub fn new(perm: PermSpec, diag: Vec<Complex64>) -> Result<Self> {
        if perm.n() != diag.len() {
            return Err(GcircError::domain(format!(
                "permutation has order {} but the diagonal has {} entries",
                perm.n(),
                diag.len()
            )));
        }
        Ok(PDMatrix { perm, diag })
    }

    pub fn perm(&self) -> &PermSpec {
        &self.perm
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    /// Entry `(i, perm(i))` equals `diag[perm(i)]`.
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.perm.n();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let j = self.perm.apply(i);
            m[(i, j)] = self.diag[j];
        }
        m
    }
}
