//! Command implementations: merge flags with file settings, run the
//! library pipelines, and write the CSV outputs.
//!
//! Each command resolves its settings with the same precedence — explicit
//! flag, then settings file, then the per-method default — runs entirely
//! single-threaded, and orders output rows by level pair and grid index so
//! reruns are reproducible. With `deterministic` set, no timestamp is
//! written and identical inputs give byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use vibronic::analytic::{beyond_turning_points, fcf_closed_form, fcf_oracle};
use vibronic::error::{Error, Result};
use vibronic::moussa::fcf_via_moussa;
use vibronic::noise::{robustness_curve, NoiseConfig, StudyPlans};
use vibronic::operator::FockDimension;
use vibronic::table::{format_sig12, FcfRecord, FcfTable, Method};
use vibronic::tomography::fcf_via_tomography;
use vibronic::translation::{translation_sequence, translation_unitary, TranslationPlan};

use crate::config::{parse_amplitude_grid, parse_dimension_list, ConfigFile, NormalizationMode};
use crate::output::{SweepFile, SweepRow, TruncationFile, TruncationRow};

/// Flag values for `sweep`; `None` falls back to the file, then defaults.
#[derive(Clone, Debug, Default)]
pub struct SweepOverrides {
    pub method: Option<String>,
    pub b0: Option<f64>,
    pub steps: Option<usize>,
    pub dim: Option<usize>,
    pub theta: Option<f64>,
    pub norm: Option<String>,
    pub out: Option<PathBuf>,
}

/// Fully resolved `sweep` settings.
#[derive(Clone, Debug)]
pub struct SweepSettings {
    pub method: Method,
    pub b0: f64,
    pub steps: usize,
    pub dim: usize,
    pub theta: f64,
    pub norm: NormalizationMode,
    pub out: PathBuf,
    pub deterministic: bool,
}

/// Flag values for `truncation`; the `dim` key holds a comma list here.
#[derive(Clone, Debug, Default)]
pub struct TruncationOverrides {
    pub dims: Option<String>,
    pub b0: Option<f64>,
    pub steps: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Fully resolved `truncation` settings; dims are sorted ascending.
#[derive(Clone, Debug)]
pub struct TruncationSettings {
    pub dims: Vec<usize>,
    pub b0: f64,
    pub steps: usize,
    pub out: PathBuf,
    pub deterministic: bool,
}

/// Flag values for `noise`; the `eta` key holds a grid spec.
#[derive(Clone, Debug, Default)]
pub struct NoiseOverrides {
    pub eta: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub theta: Option<f64>,
    pub out: Option<PathBuf>,
}

/// Fully resolved `noise` settings.
#[derive(Clone, Debug)]
pub struct NoiseSettings {
    pub eta_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub theta: f64,
    pub out: PathBuf,
    pub deterministic: bool,
}

fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Grid defaults per method: (b0, steps, dim). The ancilla route works in
/// the four-level basis out to b0 = 4; every other method defaults to the
/// eight-level basis out to b0 = 3.
fn method_defaults(method: Method) -> (f64, usize, usize) {
    match method {
        Method::Moussa => (4.0, 11, 4),
        _ => (3.0, 11, 8),
    }
}

/// The `deterministic` switch is on if either the flag or the file sets it.
pub fn resolve_deterministic(flag: bool, config: &ConfigFile) -> Result<bool> {
    Ok(flag || config.get_parsed::<bool>("deterministic")?.unwrap_or(false))
}

pub fn resolve_sweep(
    overrides: &SweepOverrides,
    config: &ConfigFile,
    deterministic: bool,
) -> Result<SweepSettings> {
    let method: Method = match overrides.method.as_deref().or_else(|| config.get("method")) {
        Some(text) => text.parse()?,
        None => Method::Tomography,
    };
    let (default_b0, default_steps, default_dim) = method_defaults(method);
    let norm = match overrides.norm.as_deref().or_else(|| config.get("norm")) {
        Some(text) => text.parse()?,
        None => NormalizationMode::Unit,
    };
    Ok(SweepSettings {
        method,
        b0: pick(overrides.b0, config.get_parsed("b0")?, default_b0),
        steps: pick(overrides.steps, config.get_parsed("steps")?, default_steps),
        dim: pick(overrides.dim, config.get_parsed("dim")?, default_dim),
        theta: pick(overrides.theta, config.get_parsed("theta")?, std::f64::consts::PI),
        norm,
        out: pick(
            overrides.out.clone(),
            config.get_parsed("out")?,
            PathBuf::from("sweep.csv"),
        ),
        deterministic,
    })
}

pub fn resolve_truncation(
    overrides: &TruncationOverrides,
    config: &ConfigFile,
    deterministic: bool,
) -> Result<TruncationSettings> {
    let dims_spec = overrides
        .dims
        .as_deref()
        .or_else(|| config.get("dim"))
        .unwrap_or("4,8,16");
    Ok(TruncationSettings {
        dims: parse_dimension_list(dims_spec)?,
        b0: pick(overrides.b0, config.get_parsed("b0")?, 4.0),
        steps: pick(overrides.steps, config.get_parsed("steps")?, 40),
        out: pick(
            overrides.out.clone(),
            config.get_parsed("out")?,
            PathBuf::from("truncation.csv"),
        ),
        deterministic,
    })
}

pub fn resolve_noise(
    overrides: &NoiseOverrides,
    config: &ConfigFile,
    deterministic: bool,
) -> Result<NoiseSettings> {
    let eta_spec = overrides
        .eta
        .as_deref()
        .or_else(|| config.get("eta"))
        .unwrap_or("0:1:0.1");
    Ok(NoiseSettings {
        eta_grid: parse_amplitude_grid(eta_spec)?,
        trials: pick(overrides.trials, config.get_parsed("trials")?, 1000),
        seed: pick(overrides.seed, config.get_parsed("seed")?, 7),
        theta: pick(overrides.theta, config.get_parsed("theta")?, std::f64::consts::PI),
        out: pick(
            overrides.out.clone(),
            config.get_parsed("out")?,
            PathBuf::from("noise.csv"),
        ),
        deterministic,
    })
}

/// Displacements b_k = b0 k / steps for k = 0..=steps.
fn displacement_grid(b0: f64, steps: usize) -> Result<Vec<f64>> {
    if !b0.is_finite() || b0 < 0.0 {
        return Err(Error::InvalidDisplacement { b: b0 });
    }
    if steps == 0 {
        return Err(Error::InvalidValue {
            what: "sweep steps",
            detail: "must be at least 1".to_string(),
        });
    }
    Ok((0..=steps).map(|k| b0 * k as f64 / steps as f64).collect())
}

/// Runs the chosen method over its grid and returns the validated table,
/// sorted by level pair and then displacement.
///
/// Closed-form methods emit the ten distinct pairs with m <= n <= 3. The
/// truncated routes emit every ordered pair they reconstruct: direct and
/// tomography cover the full level grid up to 3 (identical row layout, so
/// the two files compare line by line), while the ancilla route solves for
/// the ground-row overlaps (m = 0, n = 0..=3).
pub fn sweep_table(settings: &SweepSettings) -> Result<FcfTable> {
    let mut records = Vec::new();
    match settings.method {
        Method::Analytic | Method::Oracle => {
            let grid = displacement_grid(settings.b0, settings.steps)?;
            for m in 0..=3 {
                for n in m..=3 {
                    for &b in &grid {
                        let value = match settings.method {
                            Method::Analytic => fcf_closed_form(m, n, b)?,
                            _ => fcf_oracle(m, n, b)?,
                        };
                        records.push(FcfRecord {
                            m,
                            n,
                            b,
                            value,
                            method: settings.method,
                        });
                    }
                }
            }
        }
        Method::Direct => {
            let fock = FockDimension::new(settings.dim)?;
            let plan = TranslationPlan::new(fock, settings.b0, settings.steps)?;
            let cap = settings.dim.min(4) - 1;
            for (k, unitary) in translation_sequence(&plan)?.iter().enumerate() {
                let b = plan.displacement(k);
                for m in 0..=cap {
                    for n in 0..=cap {
                        records.push(FcfRecord {
                            m,
                            n,
                            b,
                            value: unitary.entries()[[m, n]].norm_sqr(),
                            method: Method::Direct,
                        });
                    }
                }
            }
        }
        Method::Tomography => {
            let fock = FockDimension::new(settings.dim)?;
            let plan = TranslationPlan::new(fock, settings.b0, settings.steps)?;
            for initial_level in 0..=3 {
                records.extend(fcf_via_tomography(&plan, initial_level)?);
            }
        }
        Method::Moussa => {
            let fock = FockDimension::new(settings.dim)?;
            let plan = TranslationPlan::new(fock, settings.b0, settings.steps)?;
            for k in 0..=settings.steps {
                let b = plan.displacement(k);
                let run = fcf_via_moussa(&plan, k, settings.norm.factor(b), settings.theta)?;
                for (n, &value) in run.solved.iter().enumerate() {
                    records.push(FcfRecord {
                        m: 0,
                        n,
                        b: run.displacement,
                        value,
                        method: Method::Moussa,
                    });
                }
            }
        }
    }
    records.sort_by(|left, right| {
        (left.m, left.n)
            .cmp(&(right.m, right.n))
            .then_with(|| left.b.partial_cmp(&right.b).expect("finite displacements"))
    });
    FcfTable::new(records)
}

fn timestamp_pair() -> (String, String) {
    let seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|elapsed| elapsed.as_secs())
        .unwrap_or(0);
    ("generated_unix".to_owned(), seconds.to_string())
}

pub fn cmd_sweep(settings: &SweepSettings) -> Result<String> {
    let table = sweep_table(settings)?;
    let rows = table
        .records()
        .iter()
        .map(|record| {
            Ok(SweepRow {
                record: *record,
                analytic: fcf_closed_form(record.m, record.n, record.b)?,
                tunneling: beyond_turning_points(record.m, record.n, record.b),
            })
        })
        .collect::<Result<Vec<SweepRow>>>()?;
    let mut metadata = vec![
        ("method".to_owned(), settings.method.as_str().to_owned()),
        ("b0".to_owned(), format_sig12(settings.b0)),
        ("steps".to_owned(), settings.steps.to_string()),
    ];
    if !matches!(settings.method, Method::Analytic | Method::Oracle) {
        metadata.push(("dim".to_owned(), settings.dim.to_string()));
    }
    if settings.method == Method::Moussa {
        metadata.push(("theta".to_owned(), format_sig12(settings.theta)));
        metadata.push(("norm".to_owned(), settings.norm.as_str().to_owned()));
    }
    if !settings.deterministic {
        let (key, value) = timestamp_pair();
        metadata.push((key, value));
    }
    let file = SweepFile { metadata, rows };
    let mut writer = BufWriter::new(File::create(&settings.out)?);
    file.write(&mut writer)?;
    writer.flush()?;
    Ok(format!(
        "wrote {}: {} rows",
        settings.out.display(),
        file.rows.len()
    ))
}

/// Deviations of truncated-basis overlaps from the closed forms, ordered by
/// level pair, then grid index, then basis size, plus the per-basis maxima.
pub fn truncation_rows(settings: &TruncationSettings) -> Result<(Vec<TruncationRow>, Vec<f64>)> {
    if settings.dims.is_empty() {
        return Err(Error::EmptyGrid("basis dimension list"));
    }
    for &dim in &settings.dims {
        if dim < 4 {
            return Err(Error::InvalidValue {
                what: "basis dimension list",
                detail: format!(
                    "the study compares levels up to 3, so every basis needs dim >= 4, got {dim}"
                ),
            });
        }
    }
    let grid = displacement_grid(settings.b0, settings.steps)?;
    let mut unitaries = Vec::with_capacity(settings.dims.len());
    for &dim in &settings.dims {
        let fock = FockDimension::new(dim)?;
        let per_dim = grid
            .iter()
            .map(|&b| translation_unitary(fock, b))
            .collect::<Result<Vec<_>>>()?;
        unitaries.push(per_dim);
    }
    let mut rows = Vec::new();
    let mut max_deviation = vec![0.0f64; settings.dims.len()];
    for m in 0..=3 {
        for n in m..=3 {
            for (k, &b) in grid.iter().enumerate() {
                let analytic = fcf_closed_form(m, n, b)?;
                for (d, &dim) in settings.dims.iter().enumerate() {
                    let value = unitaries[d][k].entries()[[m, n]].norm_sqr();
                    let deviation = (value - analytic).abs();
                    max_deviation[d] = max_deviation[d].max(deviation);
                    rows.push(TruncationRow {
                        m,
                        n,
                        b,
                        dim,
                        deviation,
                    });
                }
            }
        }
    }
    for later in 1..settings.dims.len() {
        if max_deviation[later] > max_deviation[later - 1] {
            return Err(Error::InvalidValue {
                what: "truncation convergence",
                detail: format!(
                    "max deviation grew from {:.3e} at dim {} to {:.3e} at dim {}",
                    max_deviation[later - 1],
                    settings.dims[later - 1],
                    max_deviation[later],
                    settings.dims[later]
                ),
            });
        }
    }
    Ok((rows, max_deviation))
}

pub fn cmd_truncation(settings: &TruncationSettings) -> Result<String> {
    let (rows, max_deviation) = truncation_rows(settings)?;
    let dims_text = settings
        .dims
        .iter()
        .map(|dim| dim.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let mut metadata = vec![
        ("dims".to_owned(), dims_text),
        ("b0".to_owned(), format_sig12(settings.b0)),
        ("steps".to_owned(), settings.steps.to_string()),
    ];
    for (d, &dim) in settings.dims.iter().enumerate() {
        metadata.push((format!("max_deviation_dim{dim}"), format_sig12(max_deviation[d])));
    }
    if !settings.deterministic {
        let (key, value) = timestamp_pair();
        metadata.push((key, value));
    }
    let file = TruncationFile { metadata, rows };
    let mut writer = BufWriter::new(File::create(&settings.out)?);
    file.write(&mut writer)?;
    writer.flush()?;
    let last = settings.dims.len() - 1;
    Ok(format!(
        "wrote {}: {} rows, max deviation {} at dim {}",
        settings.out.display(),
        file.rows.len(),
        format_sig12(max_deviation[last]),
        settings.dims[last]
    ))
}

pub fn cmd_noise(settings: &NoiseSettings) -> Result<String> {
    let cfg = NoiseConfig::new(0.0, settings.trials, settings.seed)?;
    let reference = StudyPlans::reference();
    let plans = StudyPlans::new(
        *reference.tomography(),
        *reference.moussa(),
        settings.theta,
    )?;
    let curve = robustness_curve(&settings.eta_grid, &cfg, &plans)?;
    for point in curve.points() {
        if point.eta == 0.0 && (point.sigma_tomography != 0.0 || point.sigma_moussa != 0.0) {
            return Err(Error::InvalidValue {
                what: "noise study",
                detail: format!(
                    "noiseless amplitude produced nonzero spread {:.3e}/{:.3e}",
                    point.sigma_tomography, point.sigma_moussa
                ),
            });
        }
    }
    let mut writer = BufWriter::new(File::create(&settings.out)?);
    curve.write_csv(&mut writer, settings.deterministic)?;
    writer.flush()?;
    Ok(format!(
        "wrote {}: {} amplitudes x {} trials",
        settings.out.display(),
        curve.points().len(),
        settings.trials
    ))
}
