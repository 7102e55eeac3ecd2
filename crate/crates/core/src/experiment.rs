//! Monte Carlo factorial study over (distribution, T, t) cells.
//!
//! Each run draws its own trace from a seed derived from
//! `(master_seed, cell index, run index)`, so results do not depend on
//! execution order. Cell indices enumerate distributions, then horizons, then
//! intervals, in config order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimator::{estimate_cdf, EstimateError};
use crate::evaluation::{abs_mean_diff, max_abs_cdf_diff, CellResult};
use crate::sim::{
    bin_to_indicators, derive_seed, partition_count, reference_distributions, simulate_trace,
    SimConfig, SimError, WeibullSpec,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("invalid experiment config: {0}")]
    Invalid(String),

    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEntry {
    pub label: String,
    pub alpha: f64,
    pub beta: f64,
}

impl DistributionEntry {
    pub fn spec(&self) -> Result<WeibullSpec, SimError> {
        WeibullSpec::new(self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub distributions: Vec<DistributionEntry>,
    pub horizons: Vec<f64>,
    pub intervals: Vec<f64>,
    pub runs: usize,
    pub master_seed: u64,
    pub warmup: f64,
    /// Sup-norm grid step is `t / grid_step_divisor`.
    pub grid_step_divisor: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            distributions: reference_distributions()
                .iter()
                .map(|(label, spec)| DistributionEntry {
                    label: label.to_string(),
                    alpha: spec.alpha(),
                    beta: spec.beta(),
                })
                .collect(),
            horizons: vec![50.0, 100.0, 500.0, 1000.0],
            intervals: vec![0.1, 0.2, 0.5, 1.0],
            runs: 1000,
            master_seed: 1,
            warmup: 50.0,
            grid_step_divisor: 20.0,
        }
    }
}

/// One (distribution, T, t) combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub index: u64,
    pub dist: usize,
    pub spec: WeibullSpec,
    pub horizon: f64,
    pub interval: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |msg: &str| Err(ConfigError::Invalid(msg.to_string()));
        if self.distributions.is_empty() {
            return invalid("distributions must be nonempty");
        }
        if self.horizons.is_empty() {
            return invalid("horizons must be nonempty");
        }
        if self.intervals.is_empty() {
            return invalid("intervals must be nonempty");
        }
        if self.runs == 0 {
            return invalid("runs must be at least 1");
        }
        if !(self.warmup.is_finite() && self.warmup >= 0.0) {
            return invalid("warmup must be nonnegative");
        }
        if !(self.grid_step_divisor.is_finite() && self.grid_step_divisor > 0.0) {
            return invalid("grid_step_divisor must be positive");
        }
        for d in &self.distributions {
            d.spec()?;
        }
        for &h in &self.horizons {
            for &t in &self.intervals {
                partition_count(h, t)?;
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for (dist, entry) in self.distributions.iter().enumerate() {
            let spec = entry.spec().expect("validated config");
            for &horizon in &self.horizons {
                for &interval in &self.intervals {
                    cells.push(Cell {
                        index: cells.len() as u64,
                        dist,
                        spec,
                        horizon,
                        interval,
                    });
                }
            }
        }
        cells
    }
}

/// Metrics from a single successful run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    pub max_abs_cdf_diff: f64,
    pub abs_mean_diff: f64,
}

/// Simulates, bins, estimates and scores run `run` of `cell`.
pub fn run_once(
    config: &ExperimentConfig,
    cell: &Cell,
    run: u64,
) -> Result<RunMetrics, EstimateError> {
    let sim = SimConfig {
        spec: cell.spec,
        horizon: cell.horizon,
        warmup: config.warmup,
        seed: derive_seed(config.master_seed, cell.index, run),
    };
    let trace = simulate_trace(&sim).expect("validated config");
    let series = bin_to_indicators(&trace, cell.interval).expect("validated partition");
    let estimate = estimate_cdf(&series)?;
    Ok(RunMetrics {
        max_abs_cdf_diff: max_abs_cdf_diff(
            &estimate,
            &cell.spec,
            cell.interval / config.grid_step_divisor,
        ),
        abs_mean_diff: abs_mean_diff(estimate.mu_hat(), &cell.spec),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Serial,
}

pub fn run_experiment(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<Vec<CellResult>, ConfigError> {
    config.validate()?;
    let cells = config.cells();
    let runs = config.runs as u64;
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..runs).map(move |r| (c, r)))
        .collect();
    let job = |&(c, r): &(usize, u64)| run_once(config, &cells[c], r).ok();

    let outcomes: Vec<Option<RunMetrics>> = match execution {
        Execution::Parallel => jobs.par_iter().map(job).collect(),
        Execution::Serial => jobs.iter().map(job).collect(),
    };

    Ok(cells
        .iter()
        .zip(outcomes.chunks(config.runs))
        .map(|(cell, runs)| aggregate(config, cell, runs))
        .collect())
}

// Sums in run order so parallel and serial execution agree bit for bit.
fn aggregate(config: &ExperimentConfig, cell: &Cell, runs: &[Option<RunMetrics>]) -> CellResult {
    let ok: Vec<&RunMetrics> = runs.iter().flatten().collect();
    let mean = |f: fn(&RunMetrics) -> f64| {
        (!ok.is_empty()).then(|| ok.iter().map(|m| f(m)).sum::<f64>() / ok.len() as f64)
    };
    CellResult {
        dist_label: config.distributions[cell.dist].label.clone(),
        horizon: cell.horizon,
        interval: cell.interval,
        runs_attempted: runs.len(),
        runs_failed: runs.len() - ok.len(),
        mean_max_abs_cdf_diff: mean(|m| m.max_abs_cdf_diff),
        mean_abs_mean_diff: mean(|m| m.abs_mean_diff),
    }
}
