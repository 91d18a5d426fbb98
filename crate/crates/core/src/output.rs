//! CSV and JSON serialization of sweep rows.
//!
//! CSV floats use 17 significant digits (`{:.16e}`) so that parsing a file
//! back reproduces every value bit for bit. Concurrence columns are empty on
//! degenerate rows.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::eigensolver::Method;
use crate::error::{Error, Result};
use crate::sweep::{SweepResult, SweepRow};

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 11] = [
    "j2",
    "c12_signed",
    "c23_signed",
    "c12",
    "c23",
    "c_mean_signed",
    "c_mean",
    "e_gs",
    "gap",
    "energy_relation_residual",
    "degenerate",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn parse_f64(field: &str, column: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Io(format!("bad value '{field}' in column {column}")))
}

fn parse_opt(field: &str, column: &str) -> Result<Option<f64>> {
    if field.trim().is_empty() {
        Ok(None)
    } else {
        parse_f64(field, column).map(Some)
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            fmt_f64(r.j2),
            fmt_opt(r.c12_signed),
            fmt_opt(r.c23_signed),
            fmt_opt(r.c12),
            fmt_opt(r.c23),
            fmt_opt(r.c_mean_signed),
            fmt_opt(r.c_mean),
            fmt_f64(r.e_gs),
            fmt_f64(r.gap),
            fmt_opt(r.energy_relation_residual),
            r.degenerate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_COLUMNS {
        return Err(Error::Io(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let rec = record?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        rows.push(SweepRow {
            j2: parse_f64(f(0), CSV_COLUMNS[0])?,
            c12_signed: parse_opt(f(1), CSV_COLUMNS[1])?,
            c23_signed: parse_opt(f(2), CSV_COLUMNS[2])?,
            c12: parse_opt(f(3), CSV_COLUMNS[3])?,
            c23: parse_opt(f(4), CSV_COLUMNS[4])?,
            c_mean_signed: parse_opt(f(5), CSV_COLUMNS[5])?,
            c_mean: parse_opt(f(6), CSV_COLUMNS[6])?,
            e_gs: parse_f64(f(7), CSV_COLUMNS[7])?,
            gap: parse_f64(f(8), CSV_COLUMNS[8])?,
            energy_relation_residual: parse_opt(f(9), CSV_COLUMNS[9])?,
            degenerate: match f(10).trim() {
                "true" => true,
                "false" => false,
                other => return Err(Error::Io(format!("bad degenerate flag '{other}'"))),
            },
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J1")]
    pub j1: f64,
    pub seed: u64,
    pub method: Method,
    pub tool_version: String,
    pub argmax_cmean: Option<f64>,
    pub j2th_12: Option<f64>,
    pub j2th_23: Option<f64>,
}

/// JSON document: metadata header plus the row array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonSweep {
    pub metadata: Metadata,
    pub rows: Vec<SweepRow>,
}

impl JsonSweep {
    pub fn from_result(result: &SweepResult) -> Self {
        Self {
            metadata: Metadata {
                n: result.n,
                j1: result.j1,
                seed: result.seed,
                method: result.method,
                tool_version: env!("CARGO_PKG_VERSION").to_owned(),
                argmax_cmean: result.argmax_cmean,
                j2th_12: result.thresholds.0,
                j2th_23: result.thresholds.1,
            },
            rows: result.rows.clone(),
        }
    }
}

pub fn write_json<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &JsonSweep::from_result(result))?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<JsonSweep> {
    Ok(serde_json::from_reader(input)?)
}

pub fn write_result<W: Write>(result: &SweepResult, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(&result.rows, out),
        Format::Json => write_json(result, out),
    }
}
