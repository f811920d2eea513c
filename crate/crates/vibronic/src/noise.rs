//! Monte Carlo robustness study.
//!
//! Both readout pipelines end in a linear solve over simulated intensities:
//! the diagonal-readout route solves the 13-row detection system, the
//! ancilla route solves the 5-row difference system. This module perturbs
//! exactly those pre-solve vectors with independent uniform noise in
//! [-eta, eta], re-solves, and reports sigma_eps: the per-overlap standard
//! deviation across trials, averaged over the full (m, n, b) grid of each
//! method.
//!
//! Reproducibility: every noise vector draws from its own counter-derived
//! RNG stream (seeded by the master seed), so results are bit-identical for
//! a given seed regardless of evaluation order.

use std::io::{self, BufRead, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::LeastSquares;
use crate::moussa::{overlap_design_matrix, projection_readout, OVERLAP_PAIRS};
use crate::operator::{FockDimension, OperatorMatrix};
use crate::register::{encode_level, evolve, pops_state, PopsPair};
use crate::table::format_sig12;
use crate::tolerances;
use crate::tomography::{
    build_constraint_matrix, dephase, detect, DEFAULT_FLIP_ANGLE, MAX_PIPELINE_LEVEL,
};
use crate::translation::{translation_sequence, TranslationPlan};

/// Uniform-noise Monte Carlo parameters.
#[derive(Clone, Copy, Debug)]
pub struct NoiseConfig {
    eta: f64,
    trials: usize,
    seed: u64,
}

impl NoiseConfig {
    pub fn new(eta: f64, trials: usize, seed: u64) -> Result<Self> {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::InvalidNoiseAmplitude { eta });
        }
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(Self { eta, trials, seed })
    }

    pub fn eta(self) -> f64 {
        self.eta
    }

    pub fn trials(self) -> usize {
        self.trials
    }

    pub fn seed(self) -> u64 {
        self.seed
    }
}

/// Perturb each entry by an independent uniform draw in [-eta, eta].
///
/// Deterministic given (seed, stream_index): the draw comes from a dedicated
/// RNG stream, so callers can hand out distinct stream indices and evaluate
/// in any order. Zero amplitude returns the input unchanged, bit for bit.
pub fn inject_noise(values: &[f64], cfg: &NoiseConfig, stream_index: u64) -> Vec<f64> {
    if cfg.eta == 0.0 {
        return values.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream_index);
    values.iter().map(|v| v + rng.gen_range(-cfg.eta..=cfg.eta)).collect()
}

/// The displacement grids (and ancilla rotation angle) both pipelines run on.
#[derive(Clone, Debug)]
pub struct StudyPlans {
    tomography: TranslationPlan,
    moussa: TranslationPlan,
    theta: f64,
}

impl StudyPlans {
    pub fn new(tomography: TranslationPlan, moussa: TranslationPlan, theta: f64) -> Result<Self> {
        if tomography.dim().get() != 8 {
            return Err(Error::DimensionMismatch { left: tomography.dim().get(), right: 8 });
        }
        if moussa.dim().get() != 4 {
            return Err(Error::DimensionMismatch { left: moussa.dim().get(), right: 4 });
        }
        if !theta.is_finite() || 1.0 - theta.cos() < tolerances::ANGLE_DEGENERACY {
            return Err(Error::DegenerateAngle { theta, tol: tolerances::ANGLE_DEGENERACY });
        }
        Ok(Self { tomography, moussa, theta })
    }

    /// The grids the study runs on by default: the diagonal readout on its
    /// d = 8, b0 = 3, N = 11 sweep and the ancilla route on d = 4, b0 = 4,
    /// N = 11 with theta = pi.
    pub fn reference() -> Self {
        let tomography =
            TranslationPlan::new(FockDimension::new(8).expect("8 is a valid dimension"), 3.0, 11)
                .expect("reference grid is valid");
        let moussa =
            TranslationPlan::new(FockDimension::new(4).expect("4 is a valid dimension"), 4.0, 11)
                .expect("reference grid is valid");
        Self::new(tomography, moussa, std::f64::consts::PI).expect("reference plans are valid")
    }

    pub fn tomography(&self) -> &TranslationPlan {
        &self.tomography
    }

    pub fn moussa(&self) -> &TranslationPlan {
        &self.moussa
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// One row of the robustness curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustnessPoint {
    pub eta: f64,
    pub sigma_tomography: f64,
    pub sigma_moussa: f64,
}

/// Grid shape recorded in curve metadata.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridDescription {
    pub dim: usize,
    pub b0: f64,
    pub steps: usize,
}

impl GridDescription {
    fn of(plan: &TranslationPlan) -> Self {
        Self { dim: plan.dim().get(), b0: plan.b0(), steps: plan.steps() }
    }
}

/// sigma_eps versus noise amplitude for both methods, with everything
/// needed to reproduce it.
#[derive(Clone, Debug)]
pub struct RobustnessCurve {
    pub seed: u64,
    pub trials: usize,
    pub theta: f64,
    pub tomography_grid: GridDescription,
    pub moussa_grid: GridDescription,
    points: Vec<RobustnessPoint>,
}

impl RobustnessCurve {
    pub fn points(&self) -> &[RobustnessPoint] {
        &self.points
    }

    /// Write `eta,sigma_tomography,sigma_moussa` rows behind a metadata
    /// header. `deterministic` suppresses the generation timestamp so equal
    /// inputs produce byte-identical files.
    pub fn write_csv<W: Write>(&self, mut out: W, deterministic: bool) -> io::Result<()> {
        writeln!(out, "# seed = {}", self.seed)?;
        writeln!(out, "# trials = {}", self.trials)?;
        writeln!(out, "# theta = {}", format_sig12(self.theta))?;
        for (key, grid) in
            [("tomography_grid", &self.tomography_grid), ("moussa_grid", &self.moussa_grid)]
        {
            writeln!(
                out,
                "# {key} = {},{},{}",
                grid.dim,
                format_sig12(grid.b0),
                grid.steps
            )?;
        }
        if !deterministic {
            let stamp = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            writeln!(out, "# generated_unix = {stamp}")?;
        }
        writeln!(out, "eta,sigma_tomography,sigma_moussa")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{}",
                format_sig12(p.eta),
                format_sig12(p.sigma_tomography),
                format_sig12(p.sigma_moussa)
            )?;
        }
        Ok(())
    }

    /// Read a file produced by [`RobustnessCurve::write_csv`]. Unknown
    /// metadata keys (such as the timestamp) are skipped.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut seed = None;
        let mut trials = None;
        let mut theta = None;
        let mut tomography_grid = None;
        let mut moussa_grid = None;
        let mut points = Vec::new();
        let mut saw_header = false;

        let parse_grid = |value: &str, line: usize| -> Result<GridDescription> {
            let parts: Vec<&str> = value.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected dim,b0,steps, got {value:?}"),
                });
            }
            Ok(GridDescription {
                dim: parts[0].parse().map_err(|e| Error::Parse {
                    line,
                    message: format!("bad grid dim: {e}"),
                })?,
                b0: parts[1].parse().map_err(|e| Error::Parse {
                    line,
                    message: format!("bad grid b0: {e}"),
                })?,
                steps: parts[2].parse().map_err(|e| Error::Parse {
                    line,
                    message: format!("bad grid steps: {e}"),
                })?,
            })
        };

        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                if let Some((key, value)) = rest.split_once('=') {
                    let key = key.trim();
                    let value = value.trim();
                    match key {
                        "seed" => {
                            seed = Some(value.parse().map_err(|e| Error::Parse {
                                line: line_no,
                                message: format!("bad seed: {e}"),
                            })?)
                        }
                        "trials" => {
                            trials = Some(value.parse().map_err(|e| Error::Parse {
                                line: line_no,
                                message: format!("bad trials: {e}"),
                            })?)
                        }
                        "theta" => {
                            theta = Some(value.parse().map_err(|e| Error::Parse {
                                line: line_no,
                                message: format!("bad theta: {e}"),
                            })?)
                        }
                        "tomography_grid" => tomography_grid = Some(parse_grid(value, line_no)?),
                        "moussa_grid" => moussa_grid = Some(parse_grid(value, line_no)?),
                        _ => {}
                    }
                }
                continue;
            }
            if !saw_header {
                if trimmed != "eta,sigma_tomography,sigma_moussa" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "expected header eta,sigma_tomography,sigma_moussa, got {trimmed:?}"
                        ),
                    });
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let mut parsed = [0.0_f64; 3];
            for (slot, field) in parsed.iter_mut().zip(fields.iter()) {
                *slot = field.parse().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad value {field:?}: {e}"),
                })?;
            }
            points.push(RobustnessPoint {
                eta: parsed[0],
                sigma_tomography: parsed[1],
                sigma_moussa: parsed[2],
            });
        }

        let missing = |what: &str| Error::Parse { line: 0, message: format!("missing {what}") };
        if !saw_header {
            return Err(missing("header row"));
        }
        Ok(Self {
            seed: seed.ok_or_else(|| missing("seed metadata"))?,
            trials: trials.ok_or_else(|| missing("trials metadata"))?,
            theta: theta.ok_or_else(|| missing("theta metadata"))?,
            tomography_grid: tomography_grid
                .ok_or_else(|| missing("tomography_grid metadata"))?,
            moussa_grid: moussa_grid.ok_or_else(|| missing("moussa_grid metadata"))?,
            points,
        })
    }
}

/// Running mean/variance without catastrophic cancellation; a constant
/// input sequence yields exactly zero spread.
#[derive(Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn update(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn sample_std(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0).sqrt()
        }
    }
}

// Stream index layout: | method (2 bits) | eta index (14) | trial (32) | vector counter (16) |
const ETA_BITS: u32 = 14;
const TRIAL_BITS: u32 = 32;
const COUNTER_BITS: u32 = 16;

fn stream_index(method: u64, eta_idx: usize, trial: usize, counter: u64) -> u64 {
    (method << (ETA_BITS + TRIAL_BITS + COUNTER_BITS))
        | ((eta_idx as u64) << (TRIAL_BITS + COUNTER_BITS))
        | ((trial as u64) << COUNTER_BITS)
        | counter
}

/// Clean (noise-free) pre-solve data for both pipelines, computed once per
/// curve and perturbed per trial.
struct CleanData {
    detection: LeastSquares,
    /// One 13-vector per (initial level, step).
    intensity_vectors: Vec<Vec<f64>>,
    difference_design: LeastSquares,
    /// One 4-vector of ancilla readouts per step.
    readout_vectors: Vec<[f64; 4]>,
    conversion: f64,
}

fn prepare_clean_data(plans: &StudyPlans) -> Result<CleanData> {
    let matrix = build_constraint_matrix(3, DEFAULT_FLIP_ANGLE)?;
    let detection = LeastSquares::new(matrix.entries())?;
    if detection.rank() != matrix.cols() {
        return Err(Error::RankDeficient { rank: detection.rank(), expected: matrix.cols() });
    }
    let mut intensity_vectors = Vec::new();
    let sequence = translation_sequence(plans.tomography())?;
    for level in 0..=MAX_PIPELINE_LEVEL {
        let prepared = encode_level(level, 3)?;
        for unitary in &sequence {
            let translated = evolve(&prepared, unitary)?;
            let intensities = detect(&dephase(&translated), &matrix)?;
            intensity_vectors.push(intensities.values().to_vec());
        }
    }

    let design = overlap_design_matrix();
    let difference_design = LeastSquares::new(&design)?;
    if difference_design.rank() != 4 {
        return Err(Error::RankDeficient { rank: difference_design.rank(), expected: 4 });
    }
    let mut p00 = Array2::zeros((4, 4));
    p00[[0, 0]] = C64::new(1.0, 0.0);
    let p00 = OperatorMatrix::from_entries(p00)?;
    let mut readout_vectors = Vec::new();
    for unitary in &translation_sequence(plans.moussa())? {
        let mut readouts = [0.0_f64; 4];
        for (slot, (j, k)) in readouts.iter_mut().zip(OVERLAP_PAIRS.iter()) {
            let pair = PopsPair::new(*j, *k)?;
            let translated = evolve(&pops_state(pair, 2)?, unitary)?;
            *slot = projection_readout(&translated, &p00, plans.theta())?.sx;
        }
        readout_vectors.push(readouts);
    }

    Ok(CleanData {
        detection,
        intensity_vectors,
        difference_design,
        readout_vectors,
        conversion: 1.0 - plans.theta().cos(),
    })
}

/// Run the full study: for each amplitude in `eta_grid` and each of
/// `cfg.trials` trials, perturb the pre-solve vectors of both pipelines
/// (the 13 detected intensities; the four ancilla readouts), re-solve, and
/// aggregate per-overlap standard deviations into one sigma_eps per method.
///
/// `cfg` supplies the trial count and master seed; the amplitudes come from
/// the grid, each validated like a config amplitude.
pub fn robustness_curve(
    eta_grid: &[f64],
    cfg: &NoiseConfig,
    plans: &StudyPlans,
) -> Result<RobustnessCurve> {
    if eta_grid.is_empty() {
        return Err(Error::EmptyGrid("noise amplitude grid"));
    }
    if eta_grid.len() >= (1 << ETA_BITS) {
        return Err(Error::InvalidValue {
            what: "noise amplitude grid",
            detail: format!("at most {} amplitudes supported", (1 << ETA_BITS) - 1),
        });
    }
    if cfg.trials > u32::MAX as usize {
        return Err(Error::InvalidValue {
            what: "trial count",
            detail: format!("at most {} trials supported", u32::MAX),
        });
    }

    let clean = prepare_clean_data(plans)?;
    let report_levels = MAX_PIPELINE_LEVEL + 1;
    let mut points = Vec::with_capacity(eta_grid.len());

    for (eta_idx, &eta) in eta_grid.iter().enumerate() {
        let point_cfg = NoiseConfig::new(eta, cfg.trials, cfg.seed)?;

        let mut tomography_stats =
            vec![Welford::default(); clean.intensity_vectors.len() * report_levels];
        let mut moussa_stats = vec![Welford::default(); clean.readout_vectors.len() * 4];

        for trial in 0..cfg.trials {
            for (v_idx, vector) in clean.intensity_vectors.iter().enumerate() {
                let stream = stream_index(0, eta_idx, trial, v_idx as u64);
                let noisy = inject_noise(vector, &point_cfg, stream);
                let populations = clean.detection.solve(&noisy)?;
                for (m, &p) in populations.iter().take(report_levels).enumerate() {
                    tomography_stats[v_idx * report_levels + m].update(p);
                }
            }

            for (v_idx, readouts) in clean.readout_vectors.iter().enumerate() {
                let stream = stream_index(1, eta_idx, trial, v_idx as u64);
                let noisy = inject_noise(readouts, &point_cfg, stream);
                // Traceless difference inputs: <P> = (0 - sx)/(1 - cos theta).
                let rhs = [
                    -noisy[0] / clean.conversion,
                    -noisy[1] / clean.conversion,
                    -noisy[2] / clean.conversion,
                    -noisy[3] / clean.conversion,
                    1.0,
                ];
                let solved = clean.difference_design.solve(&rhs)?;
                for (j, &value) in solved.iter().enumerate() {
                    moussa_stats[v_idx * 4 + j].update(value);
                }
            }
        }

        let average = |stats: &[Welford]| {
            stats.iter().map(Welford::sample_std).sum::<f64>() / stats.len() as f64
        };
        points.push(RobustnessPoint {
            eta,
            sigma_tomography: average(&tomography_stats),
            sigma_moussa: average(&moussa_stats),
        });
    }

    Ok(RobustnessCurve {
        seed: cfg.seed,
        trials: cfg.trials,
        theta: plans.theta(),
        tomography_grid: GridDescription::of(plans.tomography()),
        moussa_grid: GridDescription::of(plans.moussa()),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(NoiseConfig::new(0.0, 1, 0).is_ok());
        assert!(matches!(
            NoiseConfig::new(-0.1, 1, 0),
            Err(Error::InvalidNoiseAmplitude { .. })
        ));
        assert!(matches!(
            NoiseConfig::new(f64::NAN, 1, 0),
            Err(Error::InvalidNoiseAmplitude { .. })
        ));
        assert!(matches!(NoiseConfig::new(0.5, 0, 0), Err(Error::NoTrials)));
    }

    #[test]
    fn zero_amplitude_is_an_exact_identity() {
        let cfg = NoiseConfig::new(0.0, 1, 42).unwrap();
        let values = [0.1, -0.5, 0.987654321];
        assert_eq!(inject_noise(&values, &cfg, 3), values.to_vec());
    }

    #[test]
    fn injection_is_deterministic_per_stream() {
        let cfg = NoiseConfig::new(0.3, 1, 42).unwrap();
        let values = vec![0.0; 16];
        let a = inject_noise(&values, &cfg, 5);
        let b = inject_noise(&values, &cfg, 5);
        assert_eq!(a, b);
        let c = inject_noise(&values, &cfg, 6);
        assert_ne!(a, c);
        let d = inject_noise(&values, &NoiseConfig::new(0.3, 1, 43).unwrap(), 5);
        assert_ne!(a, d);
    }

    #[test]
    fn uniform_moments_match_the_distribution() {
        let cfg = NoiseConfig::new(1.0, 1, 1).unwrap();
        let zeros = vec![0.0; 100_000];
        let draws = inject_noise(&zeros, &cfg, 0);
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        let var =
            draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (draws.len() - 1) as f64;
        let third = 1.0 / 3.0;
        assert!((var - third).abs() < 0.05 * third, "variance {var}");
        for &d in &draws {
            assert!((-1.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn welford_spread_of_constant_sequence_is_zero() {
        let mut w = Welford::default();
        for _ in 0..1000 {
            w.update(0.3177);
        }
        assert_eq!(w.sample_std(), 0.0);
        let mut single = Welford::default();
        single.update(5.0);
        assert_eq!(single.sample_std(), 0.0);
    }

    #[test]
    fn study_plans_validate_dimensions_and_angle() {
        let plans = StudyPlans::reference();
        assert_eq!(plans.tomography().dim().get(), 8);
        assert_eq!(plans.moussa().dim().get(), 4);
        let d4 = TranslationPlan::new(FockDimension::new(4).unwrap(), 4.0, 11).unwrap();
        let d8 = TranslationPlan::new(FockDimension::new(8).unwrap(), 3.0, 11).unwrap();
        assert!(matches!(
            StudyPlans::new(d4, d4, std::f64::consts::PI),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            StudyPlans::new(d8, d4, 1e-9),
            Err(Error::DegenerateAngle { .. })
        ));
    }

    #[test]
    fn curve_is_deterministic_and_noise_free_at_zero() {
        let cfg = NoiseConfig::new(0.0, 25, 9).unwrap();
        let plans = StudyPlans::reference();
        let grid = [0.0, 0.4];
        let first = robustness_curve(&grid, &cfg, &plans).unwrap();
        let second = robustness_curve(&grid, &cfg, &plans).unwrap();
        assert_eq!(first.points(), second.points());
        assert_eq!(first.points()[0].sigma_tomography, 0.0);
        assert_eq!(first.points()[0].sigma_moussa, 0.0);
        assert!(first.points()[1].sigma_tomography > 0.0);
        assert!(first.points()[1].sigma_moussa > 0.0);
    }

    #[test]
    fn sigma_grows_with_amplitude_and_scales_linearly_when_small() {
        let cfg = NoiseConfig::new(0.0, 1000, 7).unwrap();
        let plans = StudyPlans::reference();
        let curve = robustness_curve(&[0.0, 0.1, 0.2, 0.3, 1.0], &cfg, &plans).unwrap();
        let pts = curve.points();
        for pair in pts.windows(2) {
            assert!(pair[1].sigma_tomography >= pair[0].sigma_tomography);
            assert!(pair[1].sigma_moussa >= pair[0].sigma_moussa);
        }
        for (lo, hi) in [
            (pts[1].sigma_tomography, pts[2].sigma_tomography),
            (pts[1].sigma_moussa, pts[2].sigma_moussa),
        ] {
            let ratio = hi / lo;
            assert!((1.7..=2.3).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn unit_amplitude_spreads_match_the_linear_error_model() {
        // The solves are linear, so each recovered overlap's spread is a fixed
        // multiple of the noise amplitude: the detection route's multiplier
        // (uniform across its grid) is sqrt(avg diag of (M^T M)^{-1} / 3)
        // ~= 0.325, the difference route's ~= 0.16.
        let cfg = NoiseConfig::new(0.0, 1000, 7).unwrap();
        let plans = StudyPlans::reference();
        let curve = robustness_curve(&[1.0], &cfg, &plans).unwrap();
        let p = curve.points()[0];
        assert!(
            (0.30..=0.36).contains(&p.sigma_tomography),
            "sigma_tomography {}",
            p.sigma_tomography
        );
        assert!((0.14..=0.18).contains(&p.sigma_moussa), "sigma_moussa {}", p.sigma_moussa);
    }

    #[test]
    fn curve_rejects_bad_grids() {
        let cfg = NoiseConfig::new(0.0, 5, 1).unwrap();
        let plans = StudyPlans::reference();
        assert!(matches!(
            robustness_curve(&[], &cfg, &plans),
            Err(Error::EmptyGrid(_))
        ));
        assert!(matches!(
            robustness_curve(&[-0.5], &cfg, &plans),
            Err(Error::InvalidNoiseAmplitude { .. })
        ));
    }

    // Files carry 12 significant digits, so a reread curve matches the
    // original to formatting precision and the next write is byte-identical.
    fn assert_points_close(a: &[RobustnessPoint], b: &[RobustnessPoint]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            for (u, v) in [
                (x.eta, y.eta),
                (x.sigma_tomography, y.sigma_tomography),
                (x.sigma_moussa, y.sigma_moussa),
            ] {
                assert!((u - v).abs() <= 1e-11 * u.abs().max(1.0), "{u} vs {v}");
            }
        }
    }

    #[test]
    fn csv_round_trip_is_byte_stable_in_deterministic_mode() {
        let cfg = NoiseConfig::new(0.0, 10, 2).unwrap();
        let plans = StudyPlans::reference();
        let curve = robustness_curve(&[0.0, 0.5], &cfg, &plans).unwrap();
        let mut first = Vec::new();
        curve.write_csv(&mut first, true).unwrap();
        let reread = RobustnessCurve::read_csv(first.as_slice()).unwrap();
        assert_eq!(reread.seed, curve.seed);
        assert_eq!(reread.trials, curve.trials);
        assert_eq!(reread.tomography_grid, curve.tomography_grid);
        assert_eq!(reread.moussa_grid, curve.moussa_grid);
        assert_points_close(reread.points(), curve.points());
        let mut second = Vec::new();
        reread.write_csv(&mut second, true).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn csv_reader_skips_timestamp_but_requires_other_metadata() {
        let cfg = NoiseConfig::new(0.0, 10, 2).unwrap();
        let plans = StudyPlans::reference();
        let curve = robustness_curve(&[0.2], &cfg, &plans).unwrap();
        let mut stamped = Vec::new();
        curve.write_csv(&mut stamped, false).unwrap();
        let text = String::from_utf8(stamped).unwrap();
        assert!(text.contains("# generated_unix = "));
        let reread = RobustnessCurve::read_csv(text.as_bytes()).unwrap();
        assert_points_close(reread.points(), curve.points());

        let headerless = "# seed = 1\n0.1,0.2,0.3\n";
        assert!(RobustnessCurve::read_csv(headerless.as_bytes()).is_err());
        let no_seed = "eta,sigma_tomography,sigma_moussa\n";
        assert!(RobustnessCurve::read_csv(no_seed.as_bytes()).is_err());
    }
}
