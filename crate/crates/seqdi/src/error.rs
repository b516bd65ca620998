//! Crate-wide error type.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix operands with incompatible shapes.
    #[error("shape mismatch in {op}: {lhs_rows}x{lhs_cols} vs {rhs_rows}x{rhs_cols}")]
    ShapeMismatch {
        op: &'static str,
        lhs_rows: usize,
        lhs_cols: usize,
        rhs_rows: usize,
        rhs_cols: usize,
    },

    /// Operation requires a square matrix.
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    /// Input fails the density-matrix checks (trace, Hermiticity, positivity).
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    /// Strength parameter outside [0, pi/4].
    #[error("theta out of range: {0} not in [0, pi/4]")]
    ThetaOutOfRange(f64),

    /// |sin(alpha1 - alpha0)| too small to invert for X_A, Z_A.
    #[error("degenerate Alice angles: |sin(alpha1 - alpha0)| <= 1e-9 (alpha0 = {alpha0}, alpha1 = {alpha1})")]
    DegenerateAliceAngles { alpha0: f64, alpha1: f64 },

    /// Wooltorton preset requires omega in (0, pi/6].
    #[error("omega out of range: {0} not in (0, pi/6]")]
    OmegaOutOfRange(f64),

    /// Coefficient denominator 1 - cos^2(delta) cos^2(2 theta) degenerate.
    #[error("degenerate coefficient denominator at theta = {theta}, delta = {delta}")]
    DegenerateCoefficients { theta: f64, delta: f64 },

    /// Security-ledger closed forms undefined at this parameter point.
    #[error("security ledger closed forms undefined: {0}")]
    LedgerDomain(String),

    /// Invalid user-supplied input (CLI level).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
