//! Error type shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong while building operators, running the
/// emulated protocols, or doing file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {got} outside supported range {min}..={max}")]
    DimensionOutOfRange { got: usize, min: usize, max: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not hermitian (residual {residual:.3e} > {tol:.1e})")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("matrix is not unitary (residual {residual:.3e} > {tol:.1e})")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("matrix is not an orthogonal projector (residual {residual:.3e} > {tol:.1e})")]
    NotProjector { residual: f64, tol: f64 },

    #[error("operator is not diagonal (off-diagonal residual {residual:.3e} > {tol:.1e})")]
    NotDiagonal { residual: f64, tol: f64 },

    #[error("state is not pure (purity defect {defect:.3e} > {tol:.1e})")]
    NotPure { defect: f64, tol: f64 },

    #[error("state trace {trace:.6e} does not match expected {expected} (tol {tol:.1e})")]
    BadTrace { trace: f64, expected: f64, tol: f64 },

    #[error("level {level} out of range for dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },

    #[error("population-difference pair needs two distinct levels, got ({level}, {level})")]
    IdenticalPair { level: usize },

    #[error("level index {index} exceeds factorial-safe maximum {max}")]
    IndexTooLarge { index: usize, max: usize },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("displacement must be nonnegative and finite, got {b}")]
    InvalidDisplacement { b: f64 },

    #[error("step index {step} exceeds plan steps {steps}")]
    StepOutOfRange { step: usize, steps: usize },

    #[error("rotation angle {theta} is degenerate: 1 - cos(theta) < {tol:.1e}")]
    DegenerateAngle { theta: f64, tol: f64 },

    #[error(
        "phase ambiguity: max |eigenvalue| {max_abs_eigenvalue} * |theta| {theta} reaches pi"
    )]
    PhaseAmbiguity { max_abs_eigenvalue: f64, theta: f64 },

    #[error("flip angle {angle} outside (0, pi/4)")]
    FlipAngleOutOfRange { angle: f64 },

    #[error("linear system is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("reconstructed population {value:.6e} outside [0, 1] beyond slack {slack:.1e}")]
    PopulationOutOfRange { value: f64, slack: f64 },

    #[error("normalization must be in (0, 1], got {value}")]
    InvalidNormalization { value: f64 },

    #[error("noise amplitude must be nonnegative and finite, got {eta}")]
    InvalidNoiseAmplitude { eta: f64 },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("empty grid: {0}")]
    EmptyGrid(&'static str),

    #[error("{what} out of range: {detail}")]
    InvalidValue { what: &'static str, detail: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
