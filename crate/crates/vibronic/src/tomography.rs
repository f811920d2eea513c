//! Diagonal-readout emulation for a three-qubit register.
//!
//! The readout chain mirrors an ensemble spin experiment: a field gradient
//! dephases the state (killing coherences, keeping populations), a small
//! flip-angle pulse converts each single-quantum population difference into
//! an observable line whose normalized intensity is exactly that difference,
//! and the twelve line intensities plus the trace constraint form an
//! overdetermined linear system whose least-squares solution recovers the
//! eight populations.
//!
//! Row layout of the detection matrix (spin-major): for each spin s = 1..3
//! (spin 1 owning the most significant level bit) and each of the four
//! spectator configurations in ascending level order, the row carries +1 at
//! the level where spin s is 0 and -1 at the partner level where it is 1;
//! the thirteenth row is all ones against a unit trace.

use std::io::{self, Write};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::register::{encode_level, evolve, DensityMatrix};
use crate::table::{format_sig12, FcfRecord, Method};
use crate::tolerances;
use crate::translation::{translation_sequence, TranslationPlan};

/// Readout pulse flip angle: 6 degrees, small enough for linear detection.
pub const DEFAULT_FLIP_ANGLE: f64 = 6.0 * std::f64::consts::PI / 180.0;

/// Highest initial/reported level in the overlap pipeline (the four-level
/// window of interest; higher rows of the d = 8 register sit against the
/// truncation edge).
pub const MAX_PIPELINE_LEVEL: usize = 3;

const NUM_QUBITS: usize = 3;
const NUM_LEVELS: usize = 1 << NUM_QUBITS;
const NUM_TRANSITIONS: usize = NUM_QUBITS * (NUM_LEVELS / 2);

/// The 13x8 linear map from populations to normalized line intensities.
#[derive(Clone, Debug)]
pub struct ConstraintMatrix {
    entries: Array2<f64>,
    row_labels: Vec<String>,
    flip_angle: f64,
}

impl ConstraintMatrix {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    /// One label per row: `q<spin> <level>\<->\<level>` for transition rows,
    /// then `trace`.
    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn flip_angle(&self) -> f64 {
        self.flip_angle
    }

    /// Numerical rank (full rank 8 is required for reconstruction).
    pub fn rank(&self) -> Result<usize> {
        Ok(LeastSquares::new(&self.entries)?.rank())
    }

    /// Dump the matrix for inspection: `label,p000,...,p111`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "label")?;
        for level in 0..self.cols() {
            write!(out, ",p{level:03b}")?;
        }
        writeln!(out)?;
        for (row, label) in self.row_labels.iter().enumerate() {
            write!(out, "{label}")?;
            for col in 0..self.cols() {
                write!(out, ",{}", format_sig12(self.entries[[row, col]]))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Build the detection matrix for the three-qubit register.
///
/// Each single-quantum line's integrated intensity is first-order
/// proportional to sin(flip angle) times the population difference across
/// the flipped spin; normalizing against a reference acquired at the same
/// flip angle cancels the angle, leaving pure population differences. The
/// cancellation is kept explicit so the angle remains a real input that
/// upstream noise injection can sit behind.
pub fn build_constraint_matrix(num_qubits: usize, flip_angle: f64) -> Result<ConstraintMatrix> {
    if num_qubits != NUM_QUBITS {
        return Err(Error::InvalidValue {
            what: "qubit count",
            detail: format!("detection layout is defined for 3 qubits, got {num_qubits}"),
        });
    }
    if !(flip_angle.is_finite() && flip_angle > 0.0 && flip_angle < std::f64::consts::FRAC_PI_4) {
        return Err(Error::FlipAngleOutOfRange { angle: flip_angle });
    }
    let reference_factor = flip_angle.sin();
    let scale = flip_angle.sin() / reference_factor;

    let mut entries = Array2::zeros((NUM_TRANSITIONS + 1, NUM_LEVELS));
    let mut row_labels = Vec::with_capacity(NUM_TRANSITIONS + 1);
    let mut row = 0;
    for spin in 1..=NUM_QUBITS {
        let bit = NUM_QUBITS - spin;
        for spectator in 0..NUM_LEVELS / 2 {
            let upper_bits = (spectator >> bit) << (bit + 1);
            let lower_bits = spectator & ((1 << bit) - 1);
            let lo = upper_bits | lower_bits;
            let hi = lo | (1 << bit);
            entries[[row, lo]] = scale;
            entries[[row, hi]] = -scale;
            row_labels.push(format!("q{spin} {lo:03b}<->{hi:03b}"));
            row += 1;
        }
    }
    for level in 0..NUM_LEVELS {
        entries[[NUM_TRANSITIONS, level]] = 1.0;
    }
    row_labels.push("trace".to_string());
    Ok(ConstraintMatrix { entries, row_labels, flip_angle })
}

/// Field-gradient emulation: zero every off-diagonal entry, keep the
/// diagonal (and hence the trace) bit-for-bit.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let mut entries = Array2::zeros((d, d));
    for i in 0..d {
        entries[[i, i]] = rho.entries()[[i, i]];
    }
    DensityMatrix::from_entries(entries, rho.kind())
        .expect("a dephased valid state stays valid")
}

/// Normalized line intensities: twelve transitions plus the trace entry.
#[derive(Clone, Debug)]
pub struct TransitionIntensities {
    values: Vec<f64>,
}

impl TransitionIntensities {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFinite { what: "transition intensity", value: v });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Read a dephased state: r = M . diag(rho). The state must already be
/// diagonal — detection models the post-gradient acquisition.
pub fn detect(rho: &DensityMatrix, matrix: &ConstraintMatrix) -> Result<TransitionIntensities> {
    if rho.dim() != matrix.cols() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: matrix.cols() });
    }
    let off = rho.off_diagonal_residual();
    if off >= tolerances::DIAGONALITY {
        return Err(Error::NotDiagonal { residual: off, tol: tolerances::DIAGONALITY });
    }
    let diag = rho.diagonal();
    let mut values = Vec::with_capacity(matrix.rows());
    for row in 0..matrix.rows() {
        let acc = diag
            .iter()
            .enumerate()
            .map(|(col, &p)| matrix.entries[[row, col]] * p)
            .sum();
        values.push(acc);
    }
    TransitionIntensities::new(values)
}

/// Populations recovered from line intensities, with the least-squares
/// residual of the solve (zero for noiseless data).
#[derive(Clone, Debug)]
pub struct ReconstructedDiagonal {
    pub populations: Vec<f64>,
    pub residual: f64,
}

/// Solve M . p = r in the least-squares sense for the eight populations.
pub fn reconstruct_diagonal(
    intensities: &TransitionIntensities,
    matrix: &ConstraintMatrix,
) -> Result<ReconstructedDiagonal> {
    if intensities.len() != matrix.rows() {
        return Err(Error::DimensionMismatch { left: intensities.len(), right: matrix.rows() });
    }
    let factorization = LeastSquares::new(&matrix.entries)?;
    let rank = factorization.rank();
    if rank != matrix.cols() {
        return Err(Error::RankDeficient { rank, expected: matrix.cols() });
    }
    let (populations, residual) = factorization.solve_with_residual(intensities.values())?;
    Ok(ReconstructedDiagonal { populations, residual })
}

/// Estimate f_{m,n'}(b) for m = 0..3 with n = `initial_level`, over every
/// step of the plan: prepare |n><n|, translate, dephase, detect, reconstruct.
///
/// Reconstructed populations may stray outside [0, 1] only within
/// [`tolerances::RANGE_SLACK`]; anything worse is reported as an error
/// rather than clamped.
pub fn fcf_via_tomography(plan: &TranslationPlan, initial_level: usize) -> Result<Vec<FcfRecord>> {
    if plan.dim().get() != NUM_LEVELS {
        return Err(Error::DimensionMismatch { left: plan.dim().get(), right: NUM_LEVELS });
    }
    if initial_level > MAX_PIPELINE_LEVEL {
        return Err(Error::IndexTooLarge { index: initial_level, max: MAX_PIPELINE_LEVEL });
    }
    let matrix = build_constraint_matrix(NUM_QUBITS, DEFAULT_FLIP_ANGLE)?;
    let prepared = encode_level(initial_level, NUM_QUBITS)?;
    let mut records = Vec::with_capacity((plan.steps() + 1) * (MAX_PIPELINE_LEVEL + 1));
    for (k, unitary) in translation_sequence(plan)?.iter().enumerate() {
        let translated = evolve(&prepared, unitary)?;
        let intensities = detect(&dephase(&translated), &matrix)?;
        let recon = reconstruct_diagonal(&intensities, &matrix)?;
        let slack = tolerances::RANGE_SLACK;
        for &p in &recon.populations {
            if p < -slack || p > 1.0 + slack {
                return Err(Error::PopulationOutOfRange { value: p, slack });
            }
        }
        let b = plan.displacement(k);
        for (m, &value) in recon.populations.iter().take(MAX_PIPELINE_LEVEL + 1).enumerate() {
            records.push(FcfRecord { m, n: initial_level, b, value, method: Method::Tomography });
        }
    }
    Ok(records)
}
