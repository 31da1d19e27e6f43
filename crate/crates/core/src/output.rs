//! Flat-file result formats.
//!
//! CSV columns, in order:
//! `scheme,s,m,tau,trials,failures,mean_error,mean_error_db,stderr_error`.
//! Floats use 10 significant digits in the style of C's `%.10g`; lines end
//! with `\n`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{CellSummary, SweepResult};
use crate::sensing::Scheme;

pub const CSV_HEADER: [&str; 9] = [
    "scheme",
    "s",
    "m",
    "tau",
    "trials",
    "failures",
    "mean_error",
    "mean_error_db",
    "stderr_error",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

/// Formats `x` like C's `printf("%.10g", x)`.
pub fn format_sig10(x: f64) -> String {
    const DIGITS: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    } else {
        let fixed = format!("{:.*}", (DIGITS - 1 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for c in &result.cells {
        writer.write_record([
            c.scheme.tag().to_string(),
            c.s.to_string(),
            c.m.to_string(),
            format_sig10(c.tau),
            c.trials.to_string(),
            c.failures.to_string(),
            format_sig10(c.mean_error),
            format_sig10(c.mean_error_db),
            format_sig10(c.stderr_error),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(result: &SweepResult) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Serialization(e.to_string()))
}

/// Reads the CSV written by [`write_csv`]. The signal length is not part of
/// the CSV and must be supplied.
pub fn read_csv<R: Read>(input: R, n: usize) -> Result<SweepResult> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Serialization(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut cells = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or_default();
        let bad = |name: &str| Error::Serialization(format!("row {}: bad `{name}`", line + 1));
        let float = |i: usize| field(i).parse::<f64>().map_err(|_| bad(CSV_HEADER[i]));
        let int = |i: usize| field(i).parse::<usize>().map_err(|_| bad(CSV_HEADER[i]));
        cells.push(CellSummary {
            scheme: field(0).parse::<Scheme>().map_err(|_| bad("scheme"))?,
            s: int(1)?,
            m: int(2)?,
            tau: float(3)?,
            trials: int(4)?,
            failures: int(5)?,
            mean_error: float(6)?,
            mean_error_db: float(7)?,
            stderr_error: float(8)?,
        });
    }
    Ok(SweepResult { n, config: None, cells })
}

pub fn write_json<W: Write>(result: &SweepResult, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, result)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<SweepResult> {
    Ok(serde_json::from_reader(input)?)
}

pub fn write_result<W: Write>(result: &SweepResult, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(result, out),
        Format::Json => write_json(result, out),
    }
}
