//! CSV layouts the tool emits, with readers that reproduce each file byte
//! for byte so outputs can be audited and re-serialized losslessly.
//!
//! Both layouts start with `# key = value` metadata lines (carried through
//! reads verbatim, in order), then a fixed header, then data rows with
//! numbers at twelve significant digits.

use std::io::{BufRead, Write};

use vibronic::error::{Error, Result};
use vibronic::table::{format_sig12, FcfRecord, FcfTable};

pub const SWEEP_HEADER: &str = "m,n,b,value,method,analytic,tunneling";
pub const TRUNCATION_HEADER: &str = "m,n,b,dim,deviation";

/// One sweep row: a measured or computed overlap next to its closed-form
/// value and whether the displacement lies past both classical turning
/// points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub record: FcfRecord,
    pub analytic: f64,
    pub tunneling: bool,
}

/// A sweep output file: ordered metadata pairs plus rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepFile {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

impl SweepFile {
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write_metadata(&mut out, &self.metadata)?;
        writeln!(out, "{SWEEP_HEADER}")?;
        for row in &self.rows {
            let r = &row.record;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.m,
                r.n,
                format_sig12(r.b),
                format_sig12(r.value),
                r.method,
                format_sig12(row.analytic),
                row.tunneling
            )?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let (metadata, body) = read_preamble(input, SWEEP_HEADER)?;
        let mut rows = Vec::new();
        for (line_no, line) in body {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 7 fields, got {}", fields.len()),
                });
            }
            let record = FcfRecord {
                m: parse_field(line_no, "m", fields[0])?,
                n: parse_field(line_no, "n", fields[1])?,
                b: parse_field(line_no, "b", fields[2])?,
                value: parse_field(line_no, "value", fields[3])?,
                method: parse_field(line_no, "method", fields[4])?,
            };
            rows.push(SweepRow {
                record,
                analytic: parse_field(line_no, "analytic", fields[5])?,
                tunneling: parse_field(line_no, "tunneling", fields[6])?,
            });
        }
        // Re-run the table validation so a hand-edited file cannot smuggle
        // out-of-range overlaps back into the pipeline.
        FcfTable::new(rows.iter().map(|row| row.record).collect())?;
        Ok(Self { metadata, rows })
    }
}

/// One truncation row: the absolute deviation of a truncated-basis overlap
/// from its closed form at one displacement and basis size.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationRow {
    pub m: usize,
    pub n: usize,
    pub b: f64,
    pub dim: usize,
    pub deviation: f64,
}

/// A truncation-study output file: ordered metadata pairs plus rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TruncationFile {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<TruncationRow>,
}

impl TruncationFile {
    pub fn write<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write_metadata(&mut out, &self.metadata)?;
        writeln!(out, "{TRUNCATION_HEADER}")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                row.m,
                row.n,
                format_sig12(row.b),
                row.dim,
                format_sig12(row.deviation)
            )?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(input: R) -> Result<Self> {
        let (metadata, body) = read_preamble(input, TRUNCATION_HEADER)?;
        let mut rows = Vec::new();
        for (line_no, line) in body {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 5 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected 5 fields, got {}", fields.len()),
                });
            }
            let row = TruncationRow {
                m: parse_field(line_no, "m", fields[0])?,
                n: parse_field(line_no, "n", fields[1])?,
                b: parse_field(line_no, "b", fields[2])?,
                dim: parse_field(line_no, "dim", fields[3])?,
                deviation: parse_field(line_no, "deviation", fields[4])?,
            };
            if !row.deviation.is_finite() || row.deviation < 0.0 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("deviation must be finite and non-negative, got {}", row.deviation),
                });
            }
            rows.push(row);
        }
        Ok(Self { metadata, rows })
    }
}

fn write_metadata<W: Write>(out: &mut W, metadata: &[(String, String)]) -> std::io::Result<()> {
    for (key, value) in metadata {
        writeln!(out, "# {key} = {value}")?;
    }
    Ok(())
}

/// Metadata pairs plus the 1-numbered data lines that follow the header.
type Preamble = (Vec<(String, String)>, Vec<(usize, String)>);

/// Collects leading `# key = value` pairs, checks the header line, and
/// returns the remaining non-empty data lines with their line numbers.
fn read_preamble<R: BufRead>(input: R, expected_header: &str) -> Result<Preamble> {
    let mut metadata = Vec::new();
    let mut body = Vec::new();
    let mut saw_header = false;
    for (index, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if saw_header {
                return Err(Error::Parse {
                    line: line_no,
                    message: "metadata after the header line".to_owned(),
                });
            }
            let Some((key, value)) = rest.split_once('=') else {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `# key = value`, got {trimmed:?}"),
                });
            };
            metadata.push((key.trim().to_owned(), value.trim().to_owned()));
            continue;
        }
        if !saw_header {
            if trimmed != expected_header {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected header {expected_header:?}, got {trimmed:?}"),
                });
            }
            saw_header = true;
            continue;
        }
        body.push((line_no, trimmed.to_owned()));
    }
    if !saw_header {
        return Err(Error::Parse {
            line: 0,
            message: format!("missing header {expected_header:?}"),
        });
    }
    Ok((metadata, body))
}

fn parse_field<T>(line: usize, name: &str, token: &str) -> Result<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    token.trim().parse().map_err(|err| Error::Parse {
        line,
        message: format!("bad {name} {token:?}: {err}"),
    })
}
