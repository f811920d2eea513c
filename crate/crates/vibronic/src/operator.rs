//! Truncated Fock-space operators for a unit-mass, unit-frequency oscillator
//! (hbar = 1).
//!
//! Conventions: a|n> = sqrt(n)|n-1>, x = (a + a^dagger)/sqrt(2),
//! p = -i(a - a^dagger)/sqrt(2). Truncation to d levels keeps [x, p] = i on
//! the top-left (d-1)x(d-1) block; the last diagonal entry of the commutator
//! is i(1 - d), the usual finite-basis artifact.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tolerances;

/// Smallest truncation that still has a ground and one excited level.
pub const MIN_DIM: usize = 2;
/// Largest truncation for which dense storage and dense exponentials are used.
pub const MAX_DIM: usize = 64;

/// Validated truncation dimension, `MIN_DIM..=MAX_DIM`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockDimension(usize);

impl FockDimension {
    pub fn new(dim: usize) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::DimensionOutOfRange { got: dim, min: MIN_DIM, max: MAX_DIM });
        }
        Ok(Self(dim))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Dense complex square matrix with residual-based structure checks.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    entries: Array2<C64>,
}

impl OperatorMatrix {
    /// Wrap a square matrix.
    pub fn from_entries(entries: Array2<C64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: Array2::eye(dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn dagger(&self) -> Self {
        let mut t = self.entries.t().to_owned();
        t.mapv_inplace(|z| z.conj());
        Self { entries: t }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(Self { entries: self.entries.dot(&other.entries) })
    }

    /// `max |A - A^dagger|` over entries.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// `max |U^dagger U - I|` over entries.
    pub fn unitarity_residual(&self) -> f64 {
        let product = self.dagger().entries.dot(&self.entries);
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((product[[i, j]] - expect).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() < tolerances::HERMITICITY
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() < tolerances::UNITARITY
    }

    /// Largest entry-wise difference to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            worst = worst.max((a - b).norm());
        }
        worst
    }
}

/// Lowering operator: a|n> = sqrt(n)|n-1>.
pub fn annihilation_operator(dim: FockDimension) -> OperatorMatrix {
    let d = dim.get();
    let mut a = Array2::zeros((d, d));
    for n in 1..d {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    OperatorMatrix { entries: a }
}

/// Raising operator, the adjoint of the lowering operator.
pub fn creation_operator(dim: FockDimension) -> OperatorMatrix {
    annihilation_operator(dim).dagger()
}

/// Number operator a^dagger a = diag(0, 1, ..., d-1).
pub fn number_operator(dim: FockDimension) -> OperatorMatrix {
    let d = dim.get();
    let mut n = Array2::zeros((d, d));
    for k in 0..d {
        n[[k, k]] = C64::new(k as f64, 0.0);
    }
    OperatorMatrix { entries: n }
}

/// Position quadrature x = (a + a^dagger)/sqrt(2).
pub fn position_operator(dim: FockDimension) -> OperatorMatrix {
    let a = annihilation_operator(dim);
    let sum = &a.entries + &a.dagger().entries;
    OperatorMatrix { entries: sum.mapv(|z| z / C64::new(2.0_f64.sqrt(), 0.0)) }
}

/// Momentum quadrature p = -i(a - a^dagger)/sqrt(2).
pub fn momentum_operator(dim: FockDimension) -> OperatorMatrix {
    let a = annihilation_operator(dim);
    let diff = &a.entries - &a.dagger().entries;
    let scale = C64::new(0.0, -1.0) / C64::new(2.0_f64.sqrt(), 0.0);
    OperatorMatrix { entries: diff.mapv(|z| z * scale) }
}

/// Undisplaced oscillator H = a^dagger a + 1/2.
pub fn reference_hamiltonian(dim: FockDimension) -> OperatorMatrix {
    let d = dim.get();
    let mut h = number_operator(dim);
    for k in 0..d {
        h.entries[[k, k]] += C64::new(0.5, 0.0);
    }
    h
}

/// Oscillator displaced by `b` along x and offset by `delta_e`:
/// H = a^dagger a + 1/2 + b^2/2 - b x + delta_e.
///
/// Up to truncation error its spectrum is the undisplaced one shifted by
/// `delta_e`.
pub fn displaced_hamiltonian(dim: FockDimension, b: f64, delta_e: f64) -> Result<OperatorMatrix> {
    if !b.is_finite() {
        return Err(Error::NonFinite { what: "displacement", value: b });
    }
    if !delta_e.is_finite() {
        return Err(Error::NonFinite { what: "energy offset", value: delta_e });
    }
    let d = dim.get();
    let x = position_operator(dim);
    let mut h = number_operator(dim).entries;
    let shift = C64::new(0.5 + b * b / 2.0 + delta_e, 0.0);
    for k in 0..d {
        h[[k, k]] += shift;
    }
    let h = h - x.entries.mapv(|z| z * C64::new(b, 0.0));
    Ok(OperatorMatrix { entries: h })
}

/// exp(-i A t) for hermitian A, by scaling-and-squaring with a truncated
/// series whose length adapts to the scaled norm (relative residual target
/// `tolerances::MATRIX_EXP_RESIDUAL`).
pub fn matrix_exponential(a: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if !t.is_finite() {
        return Err(Error::NonFinite { what: "exponential parameter", value: t });
    }
    let residual = a.hermiticity_residual();
    if residual >= tolerances::HERMITICITY {
        return Err(Error::NotHermitian { residual, tol: tolerances::HERMITICITY });
    }
    let d = a.dim();
    let m = a.entries.mapv(|z| z * C64::new(0.0, -t));

    // 1-norm (max column absolute sum) drives the scaling choice.
    let mut norm = 0.0_f64;
    for j in 0..d {
        let col: f64 = (0..d).map(|i| m[[i, j]].norm()).sum();
        norm = norm.max(col);
    }
    if norm == 0.0 {
        return Ok(OperatorMatrix::identity(d));
    }
    // Scale so the series argument has norm <= 1/2; a dozen terms then land
    // far below the residual target.
    let squarings = (norm / 0.5).log2().ceil().max(0.0) as u32;
    let scale = C64::new((0.5_f64).powi(squarings as i32), 0.0);
    let b = m.mapv(|z| z * scale);

    let mut result: Array2<C64> = Array2::eye(d);
    let mut term: Array2<C64> = Array2::eye(d);
    // Series cutoff: term max-entry below 1e-4 * target relative to the
    // running result, i.e. far inside MATRIX_EXP_RESIDUAL after squaring.
    let cutoff = 1e-4 * tolerances::MATRIX_EXP_RESIDUAL;
    for k in 1..=60_u32 {
        term = term.dot(&b).mapv(|z| z / C64::new(f64::from(k), 0.0));
        result += &term;
        let term_max = term.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        let result_max = result.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
        if term_max < cutoff * result_max {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(OperatorMatrix { entries: result })
}
