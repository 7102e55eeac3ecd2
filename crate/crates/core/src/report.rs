//! Result tables: long-form CSV per metric, factor means, and a markdown
//! rendering laid out with intervals as rows and distributions as columns.

use std::fmt::Write as _;

pub use csv::Error as CsvError;

use crate::evaluation::CellResult;

/// Placeholder for a cell whose runs all failed.
pub const MISSING: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Mean over runs of the sup-norm Cdf error.
    MaxAbsCdfDiff,
    /// Mean over runs of `|mu_hat - mu|`.
    AbsMeanDiff,
}

impl Metric {
    pub fn of(self, cell: &CellResult) -> Option<f64> {
        match self {
            Metric::MaxAbsCdfDiff => cell.mean_max_abs_cdf_diff,
            Metric::AbsMeanDiff => cell.mean_abs_mean_diff,
        }
    }

    /// Output file stem.
    pub fn table_name(self) -> &'static str {
        match self {
            Metric::MaxAbsCdfDiff => "table2",
            Metric::AbsMeanDiff => "table3",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Metric::MaxAbsCdfDiff => "Means of maximum absolute Cdf difference",
            Metric::AbsMeanDiff => "Means of absolute mean difference",
        }
    }
}

/// `T,t,dist_label,metric,failed_runs`, one row per cell.
pub fn metric_csv(cells: &[CellResult], metric: Metric) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["T", "t", "dist_label", "metric", "failed_runs"])?;
    for c in cells {
        w.write_record([
            c.horizon.to_string(),
            c.interval.to_string(),
            c.dist_label.clone(),
            fmt_metric(metric.of(c)),
            c.runs_failed.to_string(),
        ])?;
    }
    Ok(into_string(w))
}

fn fmt_metric(value: Option<f64>) -> String {
    value.map_or_else(|| MISSING.to_string(), |v| v.to_string())
}

fn into_string(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Distribution,
    Horizon,
    Interval,
    Grand,
}

impl Factor {
    pub fn name(self) -> &'static str {
        match self {
            Factor::Distribution => "distribution",
            Factor::Horizon => "T",
            Factor::Interval => "t",
            Factor::Grand => "grand",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorMean {
    pub table: &'static str,
    pub factor: Factor,
    pub level: String,
    /// `None` when no cell at this level has a value.
    pub mean: Option<f64>,
    /// Number of cells averaged.
    pub cells: usize,
}

/// Arithmetic means of the cell metrics per distribution, per T, per t, and
/// overall. Failed cells are left out.
pub fn factor_means(cells: &[CellResult], metric: Metric) -> Vec<FactorMean> {
    let table = metric.table_name();
    let mut out = Vec::new();
    let mut push = |factor: Factor, level: String, pick: &dyn Fn(&CellResult) -> bool| {
        let values: Vec<f64> = cells
            .iter()
            .filter(|c| pick(c))
            .filter_map(|c| metric.of(c))
            .collect();
        let mean = (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64);
        out.push(FactorMean {
            table,
            factor,
            level,
            mean,
            cells: values.len(),
        });
    };

    for label in unique(cells.iter().map(|c| c.dist_label.clone())) {
        push(Factor::Distribution, label.clone(), &|c| {
            c.dist_label == label
        });
    }
    for h in unique(cells.iter().map(|c| c.horizon)) {
        push(Factor::Horizon, h.to_string(), &|c| c.horizon == h);
    }
    for t in unique(cells.iter().map(|c| c.interval)) {
        push(Factor::Interval, t.to_string(), &|c| c.interval == t);
    }
    push(Factor::Grand, "all".to_string(), &|_| true);
    out
}

// First-seen order.
fn unique<T: PartialEq>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut seen = Vec::new();
    for item in items {
        if !seen.contains(&item) {
            seen.push(item);
        }
    }
    seen
}

/// `table,factor,level,mean,cells` for both metrics.
pub fn factor_means_csv(cells: &[CellResult]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["table", "factor", "level", "mean", "cells"])?;
    for metric in [Metric::MaxAbsCdfDiff, Metric::AbsMeanDiff] {
        for fm in factor_means(cells, metric) {
            w.write_record([
                fm.table.to_string(),
                fm.factor.name().to_string(),
                fm.level,
                fmt_metric(fm.mean),
                fm.cells.to_string(),
            ])?;
        }
    }
    Ok(into_string(w))
}

/// Wide layout: one row per (T, t), one column per distribution, then a
/// factor-means block.
pub fn markdown_table(cells: &[CellResult], metric: Metric) -> String {
    let labels = unique(cells.iter().map(|c| c.dist_label.clone()));
    let rows = unique(cells.iter().map(|c| (c.horizon, c.interval)));
    let mut s = String::new();

    let _ = writeln!(s, "### {}\n", metric.title());
    let _ = write!(s, "| T | t |");
    for l in &labels {
        let _ = write!(s, " ({l}) |");
    }
    let _ = writeln!(s, " failed runs |");
    let _ = writeln!(s, "|---|---|{}---|", "---|".repeat(labels.len()));
    for (h, t) in rows {
        let _ = write!(s, "| {h} | {t} |");
        let mut failed = 0;
        for l in &labels {
            let cell = cells
                .iter()
                .find(|c| c.horizon == h && c.interval == t && &c.dist_label == l);
            let text = match cell {
                Some(c) => {
                    failed += c.runs_failed;
                    metric
                        .of(c)
                        .map_or_else(|| MISSING.to_string(), |v| format!("{v:.3}"))
                }
                None => String::new(),
            };
            let _ = write!(s, " {text} |");
        }
        let _ = writeln!(s, " {failed} |");
    }

    let _ = writeln!(s, "\n| factor | level | mean |\n|---|---|---|");
    for fm in factor_means(cells, metric) {
        let mean = fm
            .mean
            .map_or_else(|| MISSING.to_string(), |v| format!("{v:.3}"));
        let _ = writeln!(s, "| {} | {} | {} |", fm.factor.name(), fm.level, mean);
    }
    s
}
