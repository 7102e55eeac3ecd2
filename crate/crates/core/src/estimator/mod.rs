//! Estimation of the inter-event-time Cdf of a stationary renewal process
//! from per-interval "no event occurred" indicators.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`survival_from_indicators`]: overlapping-window estimate of the
//!    forward-recurrence survival function `Pr{W > kt}`.
//! 2. [`determine_cutoff`]: the first lattice index `K` closing a run of
//!    three zero survival estimates.
//! 3. [`pdf_from_survival`]: centered-difference forward-recurrence pdf, with
//!    `g(0) = 1/mu` fixed by trapezoid normalization.
//! 4. [`cdf_grid_from_pdf`]: `F(kt) = 1 - mu * g(kt)` made monotone by a
//!    running maximum, then evaluated between knots with [`cdf_at`].
//!
//! [`estimate_cdf`] chains all of them.

mod cdf;
mod pdf;
mod survival;

pub use cdf::{cdf_at, cdf_grid_from_pdf, CdfEstimate};
pub use pdf::{determine_cutoff, pdf_from_survival, ForwardPdfEstimate};
pub use survival::{survival_from_indicators, IndicatorSeries, SurvivalCurve};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The survival estimate never shows three consecutive zeros, so the
    /// observation window is too short for the event rate.
    #[error(
        "observation horizon insufficient: survival never reaches three consecutive zeros \
         (largest zero index: {last_zero:?})"
    )]
    HorizonInsufficient { last_zero: Option<usize> },

    /// `1 - sum(g(kt) * t)` was not positive, which would force a nonpositive mean.
    #[error("degenerate normalization: sum of g(kt)*t over interior knots is {sum}")]
    DegenerateNormalization { sum: f64 },
}

impl EstimateError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            EstimateError::InvalidInput(_) => "invalid_input",
            EstimateError::HorizonInsufficient { .. } => "horizon_insufficient",
            EstimateError::DegenerateNormalization { .. } => "degenerate_normalization",
        }
    }
}

/// Runs the full pipeline on an indicator series.
pub fn estimate_cdf(series: &IndicatorSeries) -> Result<CdfEstimate, EstimateError> {
    Ok(estimate_detailed(series)?.cdf)
}

/// Every intermediate product of [`estimate_cdf`].
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub survival: SurvivalCurve,
    pub pdf: ForwardPdfEstimate,
    pub cdf: CdfEstimate,
}

pub fn estimate_detailed(series: &IndicatorSeries) -> Result<EstimateReport, EstimateError> {
    let survival = survival_from_indicators(series);
    let (pdf, cdf) = estimate_from_survival(&survival)?;
    Ok(EstimateReport { survival, pdf, cdf })
}

/// Stages 2 to 4 of the pipeline, starting from an already estimated
/// survival curve.
pub fn estimate_from_survival(
    survival: &SurvivalCurve,
) -> Result<(ForwardPdfEstimate, CdfEstimate), EstimateError> {
    let cutoff = determine_cutoff(survival)?;
    let pdf = pdf_from_survival(survival, cutoff)?;
    let cdf = cdf_grid_from_pdf(&pdf);
    Ok((pdf, cdf))
}
