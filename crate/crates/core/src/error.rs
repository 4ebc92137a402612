//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, precondition, and solver failures.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("{what} = {actual} exceeds the supported limit {limit}")]
    DimensionTooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("dimension mismatch: {what} has length {actual}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("particle number mismatch: input total {input} != output total {output}")]
    ParticleNumberMismatch { input: u32, output: u32 },

    #[error("matrix entry at ({row},{col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("matrix is not unitary: max deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("imaginary part of the transformation is singular (condition number {cond:.3e} exceeds {limit:.3e})")]
    SingularImaginaryPart { cond: f64, limit: f64 },

    #[error("point q = {q} lies outside the classically allowed region |q| <= {bound}")]
    ClassicallyForbidden { q: f64, bound: f64 },

    #[error("arguments outside the validity region: {0}")]
    OutsideValidityRegion(String),

    #[error(
        "no solution found: best residual {best_residual:.3e} exceeds tolerance {tolerance:.3e}"
    )]
    NoSolutionFound { best_residual: f64, tolerance: f64 },

    #[error("insufficient data: got {got} points, need at least {needed}")]
    InsufficientData { needed: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
