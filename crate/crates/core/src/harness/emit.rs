use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use super::sweep::SweepResult;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 9] = [
    "param_name",
    "param_value",
    "m_relays",
    "placement",
    "p_out",
    "ci_low",
    "ci_high",
    "trials",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Sweep(format!("unknown output format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Writes the CSV table to any writer.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    let name = result.param_name().name();
    for row in &result.rows {
        let e = &row.estimate;
        w.write_record([
            name.to_string(),
            row.param_value.to_string(),
            row.m_relays.to_string(),
            row.placement.clone(),
            e.p_hat.to_string(),
            e.ci_low.to_string(),
            e.ci_high.to_string(),
            e.trials.to_string(),
            e.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(result: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv(result, &mut buf).expect("in-memory CSV");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Writes `result` to `path`.
pub fn emit(result: &SweepResult, format: Format, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(result, &mut out).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, result)?;
            out.write_all(b"\n").map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

pub fn read_json(path: &Path) -> Result<SweepResult> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}
