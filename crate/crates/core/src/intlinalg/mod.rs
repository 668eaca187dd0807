//! Exact integer linear algebra: dense big-integer matrices, Smith normal
//! form with unimodular factors, kernels, gcds and symmetric-form invariants.

mod form;
mod matrix;
mod snf;

pub use form::{form_properties, Definiteness, FormProperties, Signature};
pub use matrix::IntegerMatrix;
pub use snf::{gcd_vector, kernel_basis, rank, smith_normal_form, SnfDecomposition};

pub(crate) use snf::kernel_from_snf;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("expected {rows}x{cols} = {} entries, found {found}", rows * cols)]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("shape mismatch: {left:?} times {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("form matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("form matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
}
