//! File formats.
//!
//! Indicator series are read from JSON,
//!
//! ```json
//! { "t": 0.5, "indicators": [1, 0, 1, 1] }
//! ```
//!
//! where `1` means no event was observed in the interval, or from CSV with a
//! header `interval,empty`: `interval` is the 1-based interval number (rows in
//! order, no gaps) and `empty` is `0` or `1`. CSV carries no interval length,
//! so the caller supplies it.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimator::{EstimateError, IndicatorSeries};
use crate::experiment::{ConfigError, ExperimentConfig};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Estimate(#[from] EstimateError),

    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndicatorFile {
    t: f64,
    indicators: Vec<u8>,
}

fn flag(value: u8, position: usize) -> Result<bool, FormatError> {
    match value {
        0 => Ok(false),
        1 => Ok(true),
        other => Err(FormatError::Malformed(format!(
            "indicator {position} must be 0 or 1, got {other}"
        ))),
    }
}

pub fn parse_indicator_json(text: &str) -> Result<IndicatorSeries, FormatError> {
    let file: IndicatorFile = serde_json::from_str(text)?;
    let indicators = file
        .indicators
        .iter()
        .enumerate()
        .map(|(i, &v)| flag(v, i + 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IndicatorSeries::new(file.t, indicators)?)
}

pub fn indicator_json(series: &IndicatorSeries) -> String {
    let file = IndicatorFile {
        t: series.interval(),
        indicators: series.indicators().iter().map(|&b| u8::from(b)).collect(),
    };
    serde_json::to_string(&file).expect("plain struct serializes")
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    interval: usize,
    empty: u8,
}

pub fn parse_indicator_csv(text: &str, t: f64) -> Result<IndicatorSeries, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["interval", "empty"] {
        return Err(FormatError::Malformed(format!(
            "expected header `interval,empty`, got `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut indicators = Vec::new();
    for row in reader.deserialize() {
        let row: CsvRow = row?;
        let expected = indicators.len() + 1;
        if row.interval != expected {
            return Err(FormatError::Malformed(format!(
                "expected interval {expected}, got {}",
                row.interval
            )));
        }
        indicators.push(flag(row.empty, expected)?);
    }
    Ok(IndicatorSeries::new(t, indicators)?)
}

/// Reads a `.csv` file as CSV (requiring `csv_interval`) and anything else
/// as JSON.
pub fn read_indicator_file(
    path: &Path,
    csv_interval: Option<f64>,
) -> Result<IndicatorSeries, FormatError> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    if is_csv {
        let t = csv_interval.ok_or_else(|| {
            FormatError::Malformed("CSV indicator files need an explicit interval length".into())
        })?;
        parse_indicator_csv(&text, t)
    } else {
        parse_indicator_json(&text)
    }
}

/// Parses and validates an experiment config. Missing keys take the default
/// (reference study) values.
pub fn parse_experiment_config(text: &str) -> Result<ExperimentConfig, FormatError> {
    let config: ExperimentConfig = serde_json::from_str(text)?;
    config.validate()?;
    Ok(config)
}
