//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, optical evolution, and the
/// experiment runners.
///
/// Diagnostic payloads are stored as `f64` regardless of the scalar type the
/// operation ran at, so the error type stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("occupation vector must have at least one mode")]
    EmptyOccupation,
    #[error("occupation entries must be non-negative, got {0}")]
    NegativeOccupation(i64),
    #[error("mode index {index} out of range for {mode_count} modes")]
    ModeOutOfRange { index: usize, mode_count: usize },
    #[error("mode count mismatch: {left} vs {right}")]
    ModeCountMismatch { left: usize, right: usize },
    #[error("state is not flagged as normalized")]
    NotNormalized,
    #[error("state norm {0} is too far from 1 to mark as normalized")]
    NormOutOfTolerance(f64),
    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,
    #[error("transmissivity must lie in [0, 1], got {0}")]
    InvalidTransmissivity(f64),
    #[error("splitter endpoints must be distinct modes")]
    DegenerateSplitter,
    #[error("photon number {photons} exceeds the supported shell of {limit}")]
    ShellOverflow { photons: usize, limit: usize },
    #[error("photon number must be at least 1")]
    ZeroPhotons,
    #[error("packet bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("Gram matrix is invalid: {0}")]
    InvalidGram(String),
    #[error("Gram matrix is indefinite: pivot residual {0} below tolerance")]
    IndefiniteGram(f64),
    #[error("permanent limited to {limit}x{limit} matrices, got {size}")]
    PermanentTooLarge { size: usize, limit: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("frequency grids must share the same axis")]
    GridMismatch,
    #[error("frequency grid did not converge: relative change {0} above 0.5%")]
    GridNotConverged(f64),
    #[error("visibility has non-negligible imaginary part {0}")]
    ComplexVisibility(f64),
    #[error("photon blocks must partition the photon indices exactly")]
    InvalidPartition,
    #[error("input truncation too coarse: {0}")]
    TruncationViolation(String),
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("unknown scheme '{0}'")]
    UnknownScheme(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("fit failed: {0}")]
    FitFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
