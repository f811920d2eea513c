//! Ancilla-interferometry estimation of overlaps.
//!
//! One ancilla qubit prepared in |+> controls a system unitary S; after the
//! controlled gate the ancilla coherence holds Tr(rho S):
//! <sigma_x> + i <sigma_y> = Tr(rho S). Three readout modes build on this:
//!
//! * a plain unitary expectation,
//! * a projector expectation via S = exp(i P theta) = I + (e^{i theta}-1) P,
//!   inverted through <P> = (Tr rho - <sigma_x>)/(1 - cos theta) - using the
//!   state's trace keeps the conversion linear over population-difference
//!   inputs, so a traceless |j><j| - |k><k| state yields the difference of
//!   the two projector expectations directly,
//! * a diagonal-observable expectation via S = exp(i A theta), whose phase
//!   arg(<sigma_x> + i <sigma_y>)/theta returns <A> for a compatible
//!   (diagonal, pure) state while |<A> theta| < pi.
//!
//! The overlap pipeline runs the projector mode on four population-difference
//! pairs of a two-qubit register and solves the resulting difference
//! equations together with a normalization row by least squares.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::operator::OperatorMatrix;
use crate::register::{
    evolve, partial_trace_system, plus_state, pops_state, tensor, DensityMatrix, PopsPair,
};
use crate::tolerances;
use crate::translation::{discrete_translation, TranslationPlan};

/// Ancilla magnetization components after the controlled gate.
#[derive(Clone, Copy, Debug)]
pub struct AncillaReadout {
    pub sx: f64,
    pub sy: f64,
}

impl AncillaReadout {
    /// <sigma_x> + i <sigma_y> = Tr(rho S).
    pub fn value(self) -> C64 {
        C64::new(self.sx, self.sy)
    }
}

/// Controlled-S on ancilla (x) system: block-diagonal [I, S].
pub fn controlled_unitary(s: &OperatorMatrix) -> Result<OperatorMatrix> {
    let residual = s.unitarity_residual();
    if residual >= tolerances::UNITARITY {
        return Err(Error::NotUnitary { residual, tol: tolerances::UNITARITY });
    }
    let d = s.dim();
    let mut cu = Array2::zeros((2 * d, 2 * d));
    for i in 0..d {
        cu[[i, i]] = C64::new(1.0, 0.0);
        for j in 0..d {
            cu[[d + i, d + j]] = s.entries()[[i, j]];
        }
    }
    OperatorMatrix::from_entries(cu)
}

/// Run the interferometer and read the ancilla: prepares |+><+| (x) rho,
/// applies controlled-S, traces out the system.
pub fn unitary_expectation(rho: &DensityMatrix, s: &OperatorMatrix) -> Result<AncillaReadout> {
    if rho.dim() != s.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: s.dim() });
    }
    let cu = controlled_unitary(s)?;
    let joint = tensor(&plus_state(), rho);
    let after = evolve(&joint, &cu)?;
    let ancilla = partial_trace_system(&after, 2)?;
    let upper = ancilla.entries()[[0, 1]];
    let lower = ancilla.entries()[[1, 0]];
    let sx = (upper + lower).re;
    let sy = (C64::new(0.0, 1.0) * (upper - lower)).re;
    Ok(AncillaReadout { sx, sy })
}

/// Raw ancilla readout for the projector mode S = I + (e^{i theta} - 1) P.
pub fn projection_readout(
    rho: &DensityMatrix,
    projector: &OperatorMatrix,
    theta: f64,
) -> Result<AncillaReadout> {
    validate_projector(projector)?;
    validate_angle(theta)?;
    let d = projector.dim();
    let phase = C64::new(0.0, theta).exp() - C64::new(1.0, 0.0);
    let mut s = Array2::eye(d);
    for i in 0..d {
        for j in 0..d {
            s[[i, j]] += phase * projector.entries()[[i, j]];
        }
    }
    unitary_expectation(rho, &OperatorMatrix::from_entries(s)?)
}

/// Projector expectation <P>_rho = (Tr rho - <sigma_x>)/(1 - cos theta).
pub fn projection_expectation(
    rho: &DensityMatrix,
    projector: &OperatorMatrix,
    theta: f64,
) -> Result<f64> {
    let readout = projection_readout(rho, projector, theta)?;
    let trace = rho.kind().expected_trace();
    Ok((trace - readout.sx) / (1.0 - theta.cos()))
}

/// Expectation of a diagonal observable on a compatible pure state, read off
/// the phase of the ancilla coherence: Tr(rho S) = e^{i <A> theta} for
/// S = exp(i A theta).
pub fn hermitian_compatible_expectation(
    rho: &DensityMatrix,
    a_diag: &OperatorMatrix,
    theta: f64,
) -> Result<f64> {
    if rho.dim() != a_diag.dim() {
        return Err(Error::DimensionMismatch { left: rho.dim(), right: a_diag.dim() });
    }
    let d = a_diag.dim();
    let mut off = 0.0_f64;
    let mut diag_im = 0.0_f64;
    for i in 0..d {
        diag_im = diag_im.max(a_diag.entries()[[i, i]].im.abs());
        for j in 0..d {
            if i != j {
                off = off.max(a_diag.entries()[[i, j]].norm());
            }
        }
    }
    if off >= tolerances::DIAGONALITY || diag_im >= tolerances::HERMITICITY {
        return Err(Error::NotDiagonal {
            residual: off.max(diag_im),
            tol: tolerances::DIAGONALITY,
        });
    }
    let state_off = rho.off_diagonal_residual();
    if state_off >= tolerances::DIAGONALITY {
        return Err(Error::NotDiagonal { residual: state_off, tol: tolerances::DIAGONALITY });
    }
    let purity = rho.purity_defect();
    if purity >= tolerances::PURITY {
        return Err(Error::NotPure { defect: purity, tol: tolerances::PURITY });
    }
    if !theta.is_finite() || theta == 0.0 {
        return Err(Error::InvalidValue {
            what: "rotation angle",
            detail: format!("must be finite and nonzero, got {theta}"),
        });
    }
    // The phase wraps at pi; a compatible pure state has <A> equal to one of
    // the diagonal entries, so bound them all a priori.
    let max_abs = (0..d).map(|i| a_diag.entries()[[i, i]].re.abs()).fold(0.0_f64, f64::max);
    if max_abs * theta.abs() >= std::f64::consts::PI {
        return Err(Error::PhaseAmbiguity { max_abs_eigenvalue: max_abs, theta });
    }
    let mut s = Array2::zeros((d, d));
    for i in 0..d {
        s[[i, i]] = C64::new(0.0, a_diag.entries()[[i, i]].re * theta).exp();
    }
    let readout = unitary_expectation(rho, &OperatorMatrix::from_entries(s)?)?;
    Ok(readout.value().arg() / theta)
}

/// The four population-difference pairs measured by the overlap pipeline.
pub const OVERLAP_PAIRS: [(usize, usize); 4] = [(0, 1), (0, 2), (1, 3), (2, 3)];

/// One displacement point of the ancilla-interferometry overlap pipeline.
#[derive(Clone, Debug)]
pub struct MoussaFcfRun {
    /// Displacement b reached at this step.
    pub displacement: f64,
    /// Population-difference pairs, in measurement order.
    pub pairs: [PopsPair; 4],
    /// Measured differences f_{0,j'} - f_{0,k'} for each pair.
    pub deltas: [f64; 4],
    /// Normalization F imposed on sum_j f_{0,j'}.
    pub normalization: f64,
    /// Least-squares solution (f_{0,0'}, f_{0,1'}, f_{0,2'}, f_{0,3'}).
    pub solved: [f64; 4],
}

/// Difference rows for the four pairs plus the normalization row.
pub fn overlap_design_matrix() -> Array2<f64> {
    let mut a = Array2::zeros((5, 4));
    for (row, (j, k)) in OVERLAP_PAIRS.iter().enumerate() {
        a[[row, *j]] = 1.0;
        a[[row, *k]] = -1.0;
    }
    for col in 0..4 {
        a[[4, col]] = 1.0;
    }
    a
}

/// Estimate the ground-row overlaps f_{0,j'} (j = 0..3) at step `k` of the
/// plan: measure the four pair differences through the projector mode on
/// |0><0|, then solve them jointly with the normalization row.
pub fn fcf_via_moussa(
    plan: &TranslationPlan,
    k: usize,
    normalization: f64,
    theta: f64,
) -> Result<MoussaFcfRun> {
    if plan.dim().get() != 4 {
        return Err(Error::DimensionMismatch { left: plan.dim().get(), right: 4 });
    }
    if !(normalization > 0.0 && normalization <= 1.0 + tolerances::TRACE) {
        return Err(Error::InvalidNormalization { value: normalization });
    }
    let u = discrete_translation(plan, k)?;
    let mut p00 = Array2::zeros((4, 4));
    p00[[0, 0]] = C64::new(1.0, 0.0);
    let p00 = OperatorMatrix::from_entries(p00)?;

    let mut pairs = [PopsPair::new(0, 1)?; 4];
    let mut deltas = [0.0_f64; 4];
    for (idx, (j, kk)) in OVERLAP_PAIRS.iter().enumerate() {
        let pair = PopsPair::new(*j, *kk)?;
        let translated = evolve(&pops_state(pair, 2)?, &u)?;
        deltas[idx] = projection_expectation(&translated, &p00, theta)?;
        pairs[idx] = pair;
    }

    let design = overlap_design_matrix();
    let fact = LeastSquares::new(&design)?;
    let rank = fact.rank();
    if rank != 4 {
        return Err(Error::RankDeficient { rank, expected: 4 });
    }
    let rhs = [deltas[0], deltas[1], deltas[2], deltas[3], normalization];
    let x = fact.solve(&rhs)?;
    Ok(MoussaFcfRun {
        displacement: plan.displacement(k),
        pairs,
        deltas,
        normalization,
        solved: [x[0], x[1], x[2], x[3]],
    })
}

fn validate_projector(p: &OperatorMatrix) -> Result<()> {
    let herm = p.hermiticity_residual();
    if herm >= tolerances::HERMITICITY {
        return Err(Error::NotHermitian { residual: herm, tol: tolerances::HERMITICITY });
    }
    let sq = p.entries().dot(p.entries());
    let mut residual = 0.0_f64;
    for (a, b) in sq.iter().zip(p.entries().iter()) {
        residual = residual.max((a - b).norm());
    }
    if residual >= tolerances::PROJECTOR {
        return Err(Error::NotProjector { residual, tol: tolerances::PROJECTOR });
    }
    Ok(())
}

fn validate_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() || 1.0 - theta.cos() < tolerances::ANGLE_DEGENERACY {
        return Err(Error::DegenerateAngle { theta, tol: tolerances::ANGLE_DEGENERACY });
    }
    Ok(())
}
