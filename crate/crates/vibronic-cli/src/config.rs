//! Flat `key = value` settings files and the value parsers shared by the
//! file format and the command line.
//!
//! Grammar: one `key = value` pair per line; lines whose first non-blank
//! character is `#` are comments; blank lines are ignored. Keys are the long
//! flag names (`method`, `b0`, `steps`, `dim`, `theta`, `norm`, `eta`,
//! `trials`, `seed`, `out`, `deterministic`); when a key repeats, the last
//! occurrence wins. Values keep everything after the first `=`, trimmed, so
//! paths containing `=` survive. Command-line flags override file values,
//! which override the per-command defaults.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use vibronic::analytic::four_level_norm;
use vibronic::error::{Error, Result};

/// Keys a settings file may define. Anything else is rejected so typos
/// surface as errors instead of silently falling back to defaults.
pub const KNOWN_KEYS: [&str; 11] = [
    "method",
    "b0",
    "steps",
    "dim",
    "theta",
    "norm",
    "eta",
    "trials",
    "seed",
    "out",
    "deterministic",
];

/// Parsed settings file: a single flat namespace of string values.
#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    /// Reads and parses the file at `path`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    /// Parses settings from text. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parse {
                    line: index + 1,
                    message: format!("expected `key = value`, got {line:?}"),
                });
            };
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Parse {
                    line: index + 1,
                    message: format!("unknown key {key:?}"),
                });
            }
            values.insert(key.to_owned(), value.trim().to_owned());
        }
        Ok(Self { values })
    }

    /// Raw string value for `key`, if the file set one.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Value for `key` parsed as `T`, if the file set one.
    pub fn get_parsed<T>(&self, key: &'static str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|err| Error::InvalidValue {
                what: key,
                detail: format!("bad value {raw:?}: {err}"),
            }),
        }
    }
}

/// How the imposed total `F` in the ancilla route is chosen at each
/// displacement: fixed at one, or the four-level closed-form sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationMode {
    Unit,
    FourLevel,
}

impl NormalizationMode {
    /// The total imposed on the four reconstructed overlaps at displacement `b`.
    pub fn factor(self, b: f64) -> f64 {
        match self {
            Self::Unit => 1.0,
            Self::FourLevel => four_level_norm(b),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Unit => "unit",
            Self::FourLevel => "four-level",
        }
    }
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormalizationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Self::Unit),
            "four-level" | "four_level" | "fourlevel" => Ok(Self::FourLevel),
            other => Err(Error::InvalidValue {
                what: "normalization mode",
                detail: format!("expected unit or four-level, got {other:?}"),
            }),
        }
    }
}

/// Parses a noise-amplitude grid given either as a comma list (`0,0.5,1`)
/// or as an inclusive range `start:stop:step`.
pub fn parse_amplitude_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::EmptyGrid("noise amplitude grid"));
    }
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(Error::InvalidValue {
                what: "noise amplitude grid",
                detail: format!("expected start:stop:step, got {text:?}"),
            });
        };
        let start = parse_grid_number(start)?;
        let stop = parse_grid_number(stop)?;
        let step = parse_grid_number(step)?;
        if step <= 0.0 {
            return Err(Error::InvalidValue {
                what: "noise amplitude grid",
                detail: format!("step must be positive, got {step}"),
            });
        }
        if start > stop {
            return Err(Error::InvalidValue {
                what: "noise amplitude grid",
                detail: format!("start {start} exceeds stop {stop}"),
            });
        }
        // Count points from the span so accumulated rounding in repeated
        // addition cannot drop the final grid point.
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        (0..=count).map(|i| start + i as f64 * step).collect()
    } else {
        text.split(',')
            .map(parse_grid_number)
            .collect::<Result<Vec<f64>>>()?
    };
    for &value in &values {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidNoiseAmplitude { eta: value });
        }
    }
    Ok(values)
}

fn parse_grid_number(token: &str) -> Result<f64> {
    let value: f64 = token.trim().parse().map_err(|err| Error::InvalidValue {
        what: "noise amplitude grid",
        detail: format!("bad number {token:?}: {err}"),
    })?;
    if !value.is_finite() {
        return Err(Error::NonFinite {
            what: "noise amplitude grid entry",
            value,
        });
    }
    Ok(value)
}

/// Parses a comma-separated list of basis dimensions and sorts it
/// ascending, the order in which the truncation study walks the bases.
pub fn parse_dimension_list(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::EmptyGrid("basis dimension list"));
    }
    let mut dims = text
        .split(',')
        .map(|token| {
            token.trim().parse().map_err(|err| Error::InvalidValue {
                what: "basis dimension list",
                detail: format!("bad dimension {token:?}: {err}"),
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    dims.sort_unstable();
    Ok(dims)
}
