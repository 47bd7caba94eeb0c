//! Delimited price files: header row, comma or tab separated, ISO-8601 or
//! DD/MM/YYYY dates.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sqp_core::series::{Frequency, PriceSeries};

use crate::error::{CliError, CliResult};

/// Column mapping for a price file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub date_column: String,
    pub close_column: String,
}

impl Default for Schema {
    fn default() -> Self {
        Self {
            date_column: "date".into(),
            close_column: "close".into(),
        }
    }
}

/// A loaded file plus what the run manifest needs to know about it.
#[derive(Debug, Clone)]
pub struct LoadedSeries {
    pub name: String,
    pub path: PathBuf,
    pub sha256: String,
    pub prices: PriceSeries<NaiveDate>,
}

pub fn parse_date(text: &str) -> Option<NaiveDate> {
    let t = text.trim();
    NaiveDate::parse_from_str(t, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(t, "%d/%m/%Y"))
        .ok()
}

fn detect_delimiter(path: &Path) -> CliResult<u8> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut header = String::new();
    BufReader::new(file)
        .read_line(&mut header)
        .map_err(|e| CliError::io(path, e))?;
    Ok(if header.contains('\t') { b'\t' } else { b',' })
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let mut file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf).map_err(|e| CliError::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn column(headers: &csv::StringRecord, name: &str, path: &Path) -> CliResult<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
        .ok_or_else(|| CliError::Input {
            path: path.into(),
            message: format!(
                "column `{name}` not found (header: {})",
                headers.iter().collect::<Vec<_>>().join(", ")
            ),
        })
}

/// Reads a price series. Rows are numbered from 1, the header excluded.
pub fn load_price_series(path: &Path, schema: &Schema, frequency: Frequency) -> CliResult<PriceSeries<NaiveDate>> {
    let delimiter = detect_delimiter(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Input {
            path: path.into(),
            message: e.to_string(),
        })?;
    let headers = reader.headers().map_err(|e| CliError::Input {
        path: path.into(),
        message: e.to_string(),
    })?;
    let date_col = column(headers, &schema.date_column, path)?;
    let close_col = column(headers, &schema.close_column, path)?;

    let row_err = |row: usize, message: String| CliError::Row {
        path: path.into(),
        row,
        message,
    };
    let mut observations = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| row_err(row, e.to_string()))?;
        let date_text = record.get(date_col).unwrap_or("");
        let close_text = record.get(close_col).unwrap_or("");
        let date = parse_date(date_text)
            .ok_or_else(|| row_err(row, format!("unparseable date `{date_text}`")))?;
        if close_text.is_empty() {
            return Err(row_err(row, "missing close".into()));
        }
        let close: f64 = close_text
            .parse()
            .map_err(|_| row_err(row, format!("unparseable close `{close_text}`")))?;
        observations.push((date, close));
    }
    PriceSeries::new(observations, frequency).map_err(|e| match e {
        sqp_core::Error::NonPositivePrice { row, value } => row_err(row + 1, format!("non-positive price {value}")),
        sqp_core::Error::NonMonotoneDates { row } => row_err(row + 1, "non-monotone dates".into()),
        other => CliError::core(path.display().to_string(), other),
    })
}

/// Loads a file, optionally resampled to weekly (every fifth observation).
pub fn load(path: &Path, schema: &Schema, frequency: Frequency) -> CliResult<LoadedSeries> {
    let daily = load_price_series(path, schema, Frequency::Daily)?;
    let prices = match frequency {
        Frequency::Daily => daily,
        Frequency::Weekly => daily.resample_every(5, Frequency::Weekly),
    };
    Ok(LoadedSeries {
        name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "series".into()),
        path: path.into(),
        sha256: sha256_file(path)?,
        prices,
    })
}
