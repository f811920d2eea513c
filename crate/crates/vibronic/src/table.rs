//! Tabulated overlap estimates and their CSV serialization.
//!
//! Every estimation route lands in the same row shape — initial level `n`,
//! final level `m`, displacement `b`, the estimate, and the method that
//! produced it — so sweeps from different routes can be compared
//! column-for-column. Files written here read back through [`FcfTable::read_csv`]
//! byte-stably: write → read → write reproduces the first file exactly.

use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tolerances;

/// Format a float with 12 significant digits (scientific notation).
pub fn format_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// How an overlap estimate was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Closed-form polynomial-times-Gaussian expression.
    Analytic,
    /// Associated-Laguerre evaluation, valid at any level pair.
    Oracle,
    /// Squared entry of the truncated translation matrix.
    Direct,
    /// Diagonal-tomography readout pipeline.
    Tomography,
    /// Ancilla-interferometry pipeline.
    Moussa,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Oracle => "oracle",
            Method::Direct => "direct",
            Method::Tomography => "tomography",
            Method::Moussa => "moussa",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "oracle" => Ok(Method::Oracle),
            "direct" => Ok(Method::Direct),
            "tomography" => Ok(Method::Tomography),
            "moussa" => Ok(Method::Moussa),
            other => Err(Error::InvalidValue {
                what: "method",
                detail: format!(
                    "expected one of analytic|oracle|direct|tomography|moussa, got {other:?}"
                ),
            }),
        }
    }
}

/// One overlap estimate f_{m,n'}(b).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FcfRecord {
    /// Final (unprimed) level.
    pub m: usize,
    /// Initial (primed) level.
    pub n: usize,
    /// Displacement.
    pub b: f64,
    /// Estimated overlap.
    pub value: f64,
    pub method: Method,
}

/// A validated collection of overlap records.
#[derive(Clone, Debug, Default)]
pub struct FcfTable {
    records: Vec<FcfRecord>,
}

impl FcfTable {
    /// Validate and wrap records. Estimates must be finite, and — except for
    /// the ancilla-interferometry method — inside [0, 1] up to
    /// [`tolerances::RANGE_SLACK`]; out-of-range values are rejected, never
    /// clamped. Interferometric estimates under an external normalization can
    /// legitimately leave [0, 1] once truncation bites (the solve distributes
    /// the imposed total over too few levels), so those are only checked
    /// finite.
    pub fn new(records: Vec<FcfRecord>) -> Result<Self> {
        for record in &records {
            if !record.b.is_finite() {
                return Err(Error::NonFinite { what: "displacement", value: record.b });
            }
            if !record.value.is_finite() {
                return Err(Error::NonFinite { what: "overlap estimate", value: record.value });
            }
            if record.method != Method::Moussa {
                let slack = tolerances::RANGE_SLACK;
                if record.value < -slack || record.value > 1.0 + slack {
                    return Err(Error::PopulationOutOfRange { value: record.value, slack });
                }
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[FcfRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Write `m,n,b,value,method` rows, floats at 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "m,n,b,value,method")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.m,
                r.n,
                format_sig12(r.b),
                format_sig12(r.value),
                r.method
            )?;
        }
        Ok(())
    }

    /// Read a file produced by [`FcfTable::write_csv`]. Lines starting with
    /// `#` and blank lines are skipped; the header row is required.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut records = Vec::new();
        let mut saw_header = false;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if !saw_header {
                if trimmed != "m,n,b,value,method" {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("expected header m,n,b,value,method, got {trimmed:?}"),
                    });
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 5 fields, got {}", fields.len()),
                });
            }
            let parse_usize = |s: &str, what: &str| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad {what} {s:?}: {e}"),
                })
            };
            let parse_f64 = |s: &str, what: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("bad {what} {s:?}: {e}"),
                })
            };
            records.push(FcfRecord {
                m: parse_usize(fields[0], "level m")?,
                n: parse_usize(fields[1], "level n")?,
                b: parse_f64(fields[2], "displacement")?,
                value: parse_f64(fields[3], "value")?,
                method: fields[4].parse().map_err(|e| Error::Parse {
                    line: line_no,
                    message: format!("{e}"),
                })?,
            });
        }
        if !saw_header {
            return Err(Error::Parse { line: 0, message: "missing header row".to_string() });
        }
        Self::new(records)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_records() -> Vec<FcfRecord> {
        vec![
            FcfRecord { m: 0, n: 0, b: 0.0, value: 1.0, method: Method::Analytic },
            FcfRecord { m: 0, n: 1, b: 1.0, value: 0.3032653298563167, method: Method::Oracle },
            FcfRecord { m: 2, n: 3, b: 1.0, value: 0.2669366705506121, method: Method::Direct },
            FcfRecord { m: 1, n: 0, b: 2.5, value: 0.01, method: Method::Tomography },
            FcfRecord { m: 0, n: 3, b: 3.2727, value: -0.19, method: Method::Moussa },
        ]
    }

    #[test]
    fn method_names_round_trip() {
        for method in
            [Method::Analytic, Method::Oracle, Method::Direct, Method::Tomography, Method::Moussa]
        {
            assert_eq!(method.as_str().parse::<Method>().unwrap(), method);
            assert_eq!(format!("{method}"), method.as_str());
        }
        assert!("laplace".parse::<Method>().is_err());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig12(0.1353352832366127), "1.35335283237e-1");
        assert_eq!(format_sig12(1.0), "1.00000000000e0");
        assert_eq!(format_sig12(0.0), "0.00000000000e0");
    }

    #[test]
    fn range_validation_depends_on_method() {
        let bad = vec![FcfRecord { m: 0, n: 0, b: 1.0, value: 1.5, method: Method::Direct }];
        assert!(matches!(FcfTable::new(bad), Err(Error::PopulationOutOfRange { .. })));
        let ok = vec![FcfRecord { m: 0, n: 0, b: 1.0, value: 1.5, method: Method::Moussa }];
        assert_eq!(FcfTable::new(ok).unwrap().len(), 1);
        let tiny_negative =
            vec![FcfRecord { m: 0, n: 0, b: 1.0, value: -1e-12, method: Method::Tomography }];
        assert!(FcfTable::new(tiny_negative).is_ok());
    }

    #[test]
    fn non_finite_values_rejected_for_every_method() {
        let nan = vec![FcfRecord { m: 0, n: 0, b: 1.0, value: f64::NAN, method: Method::Moussa }];
        assert!(matches!(FcfTable::new(nan), Err(Error::NonFinite { .. })));
        let inf_b =
            vec![FcfRecord { m: 0, n: 0, b: f64::INFINITY, value: 0.5, method: Method::Oracle }];
        assert!(matches!(FcfTable::new(inf_b), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn csv_round_trip_is_byte_stable() {
        let table = FcfTable::new(sample_records()).unwrap();
        let mut first = Vec::new();
        table.write_csv(&mut first).unwrap();
        let reread = FcfTable::read_csv(first.as_slice()).unwrap();
        assert_eq!(reread.len(), table.len());
        let mut second = Vec::new();
        reread.write_csv(&mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn reader_skips_comments_and_reports_bad_lines() {
        let good = "# metadata\nm,n,b,value,method\n0,0,1.0e0,5.0e-1,direct\n";
        assert_eq!(FcfTable::read_csv(good.as_bytes()).unwrap().len(), 1);

        let bad = "m,n,b,value,method\n0,0,oops,5.0e-1,direct\n";
        match FcfTable::read_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }

        let missing_header = "0,0,1.0,0.5,direct\n";
        assert!(matches!(
            FcfTable::read_csv(missing_header.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
