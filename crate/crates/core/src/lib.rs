//! Spectra, reconstruction and inverse design of g-circulant matrices.
//!
//! A g-circulant matrix of order `n` is determined by its first row: each
//! row is the previous one cyclically shifted `g` places to the right. For
//! prime `n` and a cyclic generator `g` of `U(Z/nZ)` its spectrum has a
//! closed form in terms of the circulant with the same first row, which
//! makes it possible to build nonnegative g-circulants with prescribed
//! spectra, both as scalar matrices and as block matrices with circulant
//! blocks.
//!
//! Every closed form in the crate is checked against [`oracle`], a plain
//! dense eigenvalue solver that knows nothing about the structure.

pub mod blockcirc;
pub mod error;
pub mod json;
pub mod matcore;
pub mod matrix;
pub mod niep;
pub mod numtheory;
pub mod oracle;
pub mod perm;
pub mod reconstruct;
pub mod spectra;

pub use error::{GcircError, Result};
pub use matcore::GCirculant;
pub use matrix::DenseMatrix;
pub use num_complex::Complex64;
pub use perm::{PDMatrix, PermSpec};
pub use spectra::Spectrum;
