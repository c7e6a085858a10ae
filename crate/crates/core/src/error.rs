use thiserror::Error;

/// Errors raised by the lattice, enumeration, Chern and moduli operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("gram matrix is not square (row {row} has {len} entries, rank is {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },

    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("bilinear form is degenerate")]
    Degenerate,

    #[error("bilinear form is not unimodular (determinant {determinant})")]
    NotUnimodular { determinant: String },

    #[error("operation requires a definite form")]
    UnsupportedForm,

    #[error("brute-force oracle refused: rank {rank} (max {max_rank}), window {window} (max {max_window})")]
    OracleRefused {
        rank: usize,
        window: u64,
        max_rank: usize,
        max_window: u64,
    },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("chern data inconsistent with a generalized complex structure: {0}")]
    Inconsistent(String),

    #[error("expected a rank-{expected} bundle, found rank {found}")]
    RankMismatch { expected: u32, found: u32 },

    #[error("manifold `{0}` has no fiber class")]
    MissingFiber(String),

    #[error("fiber class is degenerate: {0}")]
    DegenerateFiber(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid manifold spec: {0}")]
    Spec(String),

    #[error("invalid certificate: {0}")]
    Certificate(String),

    #[error("manifold `{name}` failed validation: {failures}")]
    InvalidModel { name: String, failures: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
