//! Rigid translation of oscillator eigenstates.
//!
//! U_T(b) = exp(-i p b) shifts position by b, so the overlap
//! |<m| U_T(b) |n>|^2 is the squared projection of a displaced eigenstate
//! onto an undisplaced one. The discrete variant walks the displacement in N
//! equal steps by repeated multiplication of the single-step operator - the
//! same iteration an experiment would run - rather than re-exponentiating at
//! every grid point.

use crate::error::{Error, Result};
use crate::operator::{matrix_exponential, momentum_operator, FockDimension, OperatorMatrix};

/// A displacement grid b_k = b0 k / N for k = 0..=N at fixed truncation.
#[derive(Clone, Copy, Debug)]
pub struct TranslationPlan {
    dim: FockDimension,
    b0: f64,
    steps: usize,
}

impl TranslationPlan {
    /// `b0 >= 0` finite, `steps >= 1`.
    pub fn new(dim: FockDimension, b0: f64, steps: usize) -> Result<Self> {
        if !b0.is_finite() || b0 < 0.0 {
            return Err(Error::InvalidDisplacement { b: b0 });
        }
        if steps == 0 {
            return Err(Error::InvalidValue {
                what: "translation steps",
                detail: "must be at least 1".to_string(),
            });
        }
        Ok(Self { dim, b0, steps })
    }

    pub fn dim(&self) -> FockDimension {
        self.dim
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step_size(&self) -> f64 {
        self.b0 / self.steps as f64
    }

    /// Displacement reached after `k` steps.
    pub fn displacement(&self, k: usize) -> f64 {
        self.b0 * k as f64 / self.steps as f64
    }
}

/// Translation operator U_T(b) = exp(-i p b).
pub fn translation_unitary(dim: FockDimension, b: f64) -> Result<OperatorMatrix> {
    if !b.is_finite() {
        return Err(Error::NonFinite { what: "displacement", value: b });
    }
    matrix_exponential(&momentum_operator(dim), b)
}

/// k-step discrete translation [U_T(b0/N)]^k, built by repeated
/// multiplication of the single-step operator.
pub fn discrete_translation(plan: &TranslationPlan, k: usize) -> Result<OperatorMatrix> {
    if k > plan.steps {
        return Err(Error::StepOutOfRange { step: k, steps: plan.steps });
    }
    let step = translation_unitary(plan.dim, plan.step_size())?;
    let mut u = OperatorMatrix::identity(plan.dim.get());
    for _ in 0..k {
        u = u.mul(&step)?;
    }
    Ok(u)
}

/// All partial products [U_T(b0/N)]^k for k = 0..=N, sharing the
/// intermediate multiplications.
pub fn translation_sequence(plan: &TranslationPlan) -> Result<Vec<OperatorMatrix>> {
    let step = translation_unitary(plan.dim, plan.step_size())?;
    let mut out = Vec::with_capacity(plan.steps + 1);
    out.push(OperatorMatrix::identity(plan.dim.get()));
    for k in 1..=plan.steps {
        let next = out[k - 1].mul(&step)?;
        out.push(next);
    }
    Ok(out)
}

/// Direct truncated-basis overlap |<m| U_T(b) |n>|^2.
pub fn truncated_fcf(dim: FockDimension, m: usize, n: usize, b: f64) -> Result<f64> {
    let d = dim.get();
    if m >= d {
        return Err(Error::LevelOutOfRange { level: m, dim: d });
    }
    if n >= d {
        return Err(Error::LevelOutOfRange { level: n, dim: d });
    }
    let u = translation_unitary(dim, b)?;
    Ok(u.entries()[[m, n]].norm_sqr())
}
