//! Numerical tolerances, stated once and reused everywhere.
//!
//! Two families: *validation* tolerances guard preconditions (is this matrix
//! hermitian / unitary / a projector?), *contract* tolerances bound what the
//! algorithms themselves must achieve (solver residuals, range slack).

/// Max-entry residual `max |A - A^dagger|` below which a matrix counts as hermitian.
pub const HERMITICITY: f64 = 1e-12;

/// Max-entry residual `max |U^dagger U - I|` below which a matrix counts as unitary.
pub const UNITARITY: f64 = 1e-10;

/// Max-entry residual `max |P^2 - P|` below which a matrix counts as an
/// orthogonal projector (hermiticity is checked separately).
pub const PROJECTOR: f64 = 1e-10;

/// Max off-diagonal magnitude below which a density matrix counts as diagonal.
pub const DIAGONALITY: f64 = 1e-10;

/// Allowed deviation of a state's trace from its declared value (1 or 0).
pub const TRACE: f64 = 1e-10;

/// Allowed purity defect `|Tr(rho^2) - 1|` for states that must be pure.
pub const PURITY: f64 = 1e-10;

/// Relative residual target of the scaled-and-squared series exponential.
pub const MATRIX_EXP_RESIDUAL: f64 = 1e-12;

/// Consistent linear systems must be reproduced to this 2-norm residual.
pub const SOLVER_RESIDUAL: f64 = 1e-9;

/// Relative threshold on |R[i,i]| for QR-based rank decisions.
pub const RANK: f64 = 1e-10;

/// `1 - cos(theta)` must exceed this before dividing by it.
pub const ANGLE_DEGENERACY: f64 = 1e-6;

/// Noiseless reconstructed populations may stray outside [0, 1] by at most this.
pub const RANGE_SLACK: f64 = 1e-6;
