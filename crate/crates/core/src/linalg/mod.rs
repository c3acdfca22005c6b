//! Exact linear algebra over the rationals.
//!
//! Everything here works with arbitrary-precision rationals so that rank,
//! characteristic polynomials and Jordan structure are decided exactly. Jordan
//! normal form is not continuous in the matrix entries, so a floating-point
//! substrate could not answer "is the Jordan form constant?" at all.

mod congruence;
mod factor;
mod jordan;
mod matrix;
mod poly;
mod rational;

pub use congruence::{congruence_diagonalize, dual_vectors, gram_signature, Inertia};
pub use factor::{factor_over_q, square_free_decomposition};
pub use jordan::{
    jordan_fingerprint, jordan_fingerprint_with_char_poly, jordan_partition_at, rank_sequence,
    JordanFingerprint, Partition,
};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use rational::{parse_rational, rat, Rational, Vector};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (first mismatch at ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged matrix rows: row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    DependentVectors,
}
