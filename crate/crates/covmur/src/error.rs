//! Error type shared by every module.
//!
//! Structural problems (wrong sizes, malformed tables), mathematical
//! violations (lost positivity, non-unitary conjugators), and I/O or schema
//! problems are distinguished so the CLI can map them onto its exit codes.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum CovmurError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operator is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.0e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not unitary: defect {defect:.3e} exceeds tolerance {tol:.0e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("operator is not positive semidefinite: min eigenvalue {min_eigenvalue:.6e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator must have trace 1: got {trace:.12}")]
    TraceNotOne { trace: f64 },

    #[error("outcome sets do not match")]
    OutcomeMismatch,

    #[error("outcome set is not a full Cartesian product")]
    NonProductOutcomeSet,

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid outcome action: {0}")]
    InvalidAction(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("infeasible covariant joint: |j| = {norm} exceeds 1")]
    InfeasibleJoint { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unsupported schema version {found}; this tool reads schema 1")]
    SchemaVersion { found: i64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CovmurError>;
