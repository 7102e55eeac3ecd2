//! Estimating the inter-event-time distribution of a stationary renewal
//! process when periodic inspection only reveals whether each interval saw at
//! least one event.
//!
//! - [`estimator`]: the indicator-to-Cdf pipeline.
//! - [`sim`]: Weibull renewal traces and binning into indicator series.
//! - [`evaluation`]: error metrics against the analytic truth.
//! - [`experiment`]: the Monte Carlo factorial study.
//! - [`report`]: result tables and factor means.
//! - [`formats`]: indicator and experiment file formats.

pub mod estimator;
pub mod evaluation;
pub mod experiment;
pub mod formats;
pub mod report;
pub mod sim;

pub use estimator::{
    cdf_at, cdf_grid_from_pdf, determine_cutoff, estimate_cdf, estimate_detailed,
    estimate_from_survival, pdf_from_survival, survival_from_indicators, CdfEstimate,
    EstimateError, EstimateReport, ForwardPdfEstimate, IndicatorSeries, SurvivalCurve,
};
pub use evaluation::{abs_mean_diff, max_abs_cdf_diff, CellResult};
pub use experiment::{run_experiment, ConfigError, Execution, ExperimentConfig};
pub use sim::{
    bin_to_indicators, simulate_trace, weibull_cdf, weibull_mean, EventTrace, SimConfig, SimError,
    WeibullSpec,
};
