//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by cone construction, decompositions, sampling and audits.
#[derive(Debug, Error)]
pub enum Error {
    /// A block partition was empty or contained a zero-sized block.
    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    /// A block basis matrix has the wrong shape or the basis is rank deficient.
    #[error("invalid block basis for block ({l}, {k}): {reason}")]
    InvalidBasis { l: usize, k: usize, reason: String },

    /// Two structured values belong to different cone structures.
    #[error("operands belong to different cone structures")]
    StructureMismatch,

    /// A coordinate vector or matrix has the wrong dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A product left the structured subspace by more than the closure tolerance.
    #[error("closure violation in {context}: relative residual {residual:.3e}")]
    ClosureViolation { context: String, residual: f64 },

    /// The point is not in the open cone (Cholesky failed).
    #[error("point is not in the open cone")]
    NotInCone,

    /// A dense factor failed to project back onto the triangular group.
    #[error("factor leaks outside the triangular group: residual {residual:.3e}")]
    StructureLeak { residual: f64 },

    /// Newton iteration for the dual decomposition did not converge.
    #[error("point is not in the open dual cone (residual {residual:.3e} after {iterations} iterations)")]
    NotInDualCone { iterations: usize, residual: f64 },

    /// The parameter vector lies outside the Gindikin-Wallach set.
    #[error("parameter is not in the Gindikin-Wallach set")]
    NotInGindikinSet,

    /// A regular-stratum operation was invoked with a singular parameter.
    #[error("parameter lies in a singular stratum; a regular parameter is required")]
    NonRegularStratum,

    /// The requested off-diagonal block space is zero.
    #[error("block ({l}, {k}) is zero-dimensional")]
    EmptyBlock { l: usize, k: usize },

    /// An operation-specific precondition failed.
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// Scale extraction with c too close to 1.
    #[error("degenerate scale c = {0}: extraction needs |c - 1| bounded away from zero")]
    DegenerateScale(f64),

    /// Character probes disagree beyond tolerance.
    #[error("inconsistent character probes for coordinate {coordinate}: {detail}")]
    InconsistentCharacter { coordinate: usize, detail: String },

    /// A Laplace-transform argument lies outside the finiteness domain.
    #[error("argument lies outside the transform domain")]
    OutOfDomain,

    /// Malformed user input (CLI arguments, file contents).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
