//! Qubit-register encoding of oscillator levels and density-matrix plumbing.
//!
//! Levels are labelled big-endian: |0> = |00..0>, |1> flips the last qubit,
//! so level n of a q-qubit register is simply basis index n. Two state
//! families appear throughout: ideal pseudopure states (trace 1) and
//! population-difference states |j><j| - |k><k| (trace 0), which turn every
//! linear readout into a difference of readouts.

use ndarray::linalg::kron;
use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, MAX_DIM};
use crate::tolerances;

/// Declared trace of a state: 1 for pseudopure, 0 for population differences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    Unit,
    Traceless,
}

impl TraceKind {
    /// The trace a state of this kind is validated against.
    pub fn expected_trace(self) -> f64 {
        match self {
            TraceKind::Unit => 1.0,
            TraceKind::Traceless => 0.0,
        }
    }

    fn combine(self, other: Self) -> Self {
        if self == TraceKind::Unit && other == TraceKind::Unit {
            TraceKind::Unit
        } else {
            TraceKind::Traceless
        }
    }
}

/// Hermitian matrix with a declared trace, validated at construction.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: Array2<C64>,
    kind: TraceKind,
}

impl DensityMatrix {
    pub fn from_entries(entries: Array2<C64>, kind: TraceKind) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let mut herm = 0.0_f64;
        for i in 0..rows {
            for j in 0..rows {
                herm = herm.max((entries[[i, j]] - entries[[j, i]].conj()).norm());
            }
        }
        if herm >= tolerances::HERMITICITY {
            return Err(Error::NotHermitian { residual: herm, tol: tolerances::HERMITICITY });
        }
        let trace: C64 = (0..rows).map(|i| entries[[i, i]]).sum();
        let expected = kind.expected_trace();
        if (trace.re - expected).abs() > tolerances::TRACE || trace.im.abs() > tolerances::TRACE {
            return Err(Error::BadTrace { trace: trace.re, expected, tol: tolerances::TRACE });
        }
        Ok(Self { entries, kind })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn kind(&self) -> TraceKind {
        self.kind
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.entries[[i, i]]).sum()
    }

    /// Real parts of the diagonal (populations).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[[i, i]].re).collect()
    }

    /// Largest off-diagonal magnitude.
    pub fn off_diagonal_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    worst = worst.max(self.entries[[i, j]].norm());
                }
            }
        }
        worst
    }

    /// |Tr(rho^2) - 1|, zero for pure unit-trace states.
    pub fn purity_defect(&self) -> f64 {
        let sq = self.entries.dot(&self.entries);
        let tr: C64 = (0..self.dim()).map(|i| sq[[i, i]]).sum();
        (tr.re - 1.0).abs() + tr.im.abs()
    }
}

/// Pseudopure state |n><n| on a q-qubit register (big-endian level labels).
pub fn encode_level(level: usize, num_qubits: usize) -> Result<DensityMatrix> {
    let dim = register_dim(num_qubits)?;
    if level >= dim {
        return Err(Error::LevelOutOfRange { level, dim });
    }
    let mut entries = Array2::zeros((dim, dim));
    entries[[level, level]] = C64::new(1.0, 0.0);
    DensityMatrix::from_entries(entries, TraceKind::Unit)
}

/// An ordered pair of distinct levels for a population-difference state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PopsPair {
    j: usize,
    k: usize,
}

impl PopsPair {
    pub fn new(j: usize, k: usize) -> Result<Self> {
        if j == k {
            return Err(Error::IdenticalPair { level: j });
        }
        Ok(Self { j, k })
    }

    pub fn j(self) -> usize {
        self.j
    }

    pub fn k(self) -> usize {
        self.k
    }
}

/// Population-difference state |j><j| - |k><k| (traceless).
pub fn pops_state(pair: PopsPair, num_qubits: usize) -> Result<DensityMatrix> {
    let dim = register_dim(num_qubits)?;
    if pair.j >= dim {
        return Err(Error::LevelOutOfRange { level: pair.j, dim });
    }
    if pair.k >= dim {
        return Err(Error::LevelOutOfRange { level: pair.k, dim });
    }
    let mut entries = Array2::zeros((dim, dim));
    entries[[pair.j, pair.j]] = C64::new(1.0, 0.0);
    entries[[pair.k, pair.k]] = C64::new(-1.0, 0.0);
    DensityMatrix::from_entries(entries, TraceKind::Traceless)
}

/// Single-qubit |+><+|, the ancilla preparation for interferometric readout.
pub fn plus_state() -> DensityMatrix {
    let entries = Array2::from_elem((2, 2), C64::new(0.5, 0.0));
    DensityMatrix { entries, kind: TraceKind::Unit }
}

/// Kronecker product; the left factor is the more significant register.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    DensityMatrix {
        entries: kron(&a.entries, &b.entries),
        kind: a.kind.combine(b.kind),
    }
}

/// Trace out the trailing (system) register of an ancilla (x) system state,
/// leaving the `ancilla_dim`-dimensional ancilla state.
pub fn partial_trace_system(rho: &DensityMatrix, ancilla_dim: usize) -> Result<DensityMatrix> {
    let dim = rho.dim();
    if ancilla_dim == 0 || !dim.is_multiple_of(ancilla_dim) {
        return Err(Error::DimensionMismatch { left: dim, right: ancilla_dim });
    }
    let sys = dim / ancilla_dim;
    let mut out = Array2::zeros((ancilla_dim, ancilla_dim));
    for i in 0..ancilla_dim {
        for j in 0..ancilla_dim {
            let mut sum = C64::new(0.0, 0.0);
            for s in 0..sys {
                sum += rho.entries[[i * sys + s, j * sys + s]];
            }
            out[[i, j]] = sum;
        }
    }
    DensityMatrix::from_entries(out, rho.kind)
}

/// Tr(rho O).
pub fn expectation(rho: &DensityMatrix, op: &OperatorMatrix) -> Result<C64> {
    if rho.dim() != op.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: op.dim() });
    }
    let mut sum = C64::new(0.0, 0.0);
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            sum += rho.entries[[i, j]] * op.entries()[[j, i]];
        }
    }
    Ok(sum)
}

/// U rho U^dagger for unitary U.
pub fn evolve(rho: &DensityMatrix, u: &OperatorMatrix) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: u.dim() });
    }
    let residual = u.unitarity_residual();
    if residual >= tolerances::UNITARITY {
        return Err(Error::NotUnitary { residual, tol: tolerances::UNITARITY });
    }
    let dagger = u.dagger();
    let entries = u.entries().dot(&rho.entries).dot(dagger.entries());
    DensityMatrix::from_entries(entries, rho.kind)
}

fn register_dim(num_qubits: usize) -> Result<usize> {
    if num_qubits == 0 {
        return Err(Error::DimensionOutOfRange { got: 0, min: 1, max: 6 });
    }
    let dim = 1usize << num_qubits;
    if dim > MAX_DIM {
        return Err(Error::DimensionOutOfRange { got: dim, min: 2, max: MAX_DIM });
    }
    Ok(dim)
}
