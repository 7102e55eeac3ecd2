use serde::{Deserialize, Serialize};

use super::{EstimateError, ForwardPdfEstimate};

/// Monotone piecewise-linear Cdf estimate with knots at `0, t, ..., (K-1)t`.
///
/// Beyond the last knot the estimate is held constant at its final value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfEstimate {
    t: f64,
    knots: Vec<f64>,
    mu_hat: f64,
}

impl CdfEstimate {
    /// Builds an estimate from explicit knots, which must start at 0 and be
    /// nondecreasing within `[0, 1]`.
    pub fn from_knots(t: f64, knots: Vec<f64>, mu_hat: f64) -> Result<Self, EstimateError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(EstimateError::InvalidInput(format!(
                "interval length must be positive and finite, got {t}"
            )));
        }
        if knots.first() != Some(&0.0) {
            return Err(EstimateError::InvalidInput("first knot must be 0".into()));
        }
        if knots.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(EstimateError::InvalidInput("knot outside [0, 1]".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(EstimateError::InvalidInput("knots decrease".into()));
        }
        if !(mu_hat.is_finite() && mu_hat > 0.0) {
            return Err(EstimateError::InvalidInput(format!(
                "mean must be positive, got {mu_hat}"
            )));
        }
        Ok(Self { t, knots, mu_hat })
    }

    pub fn interval(&self) -> f64 {
        self.t
    }

    /// `F(0), F(t), ..., F((K-1)t)`.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    /// Position of the last knot, `(K-1)t`.
    pub fn support_end(&self) -> f64 {
        (self.knots.len() - 1) as f64 * self.t
    }

    pub fn knot_positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.knots.len()).map(move |k| k as f64 * self.t)
    }
}

/// Evaluates `1 - mu g(kt)` on the knots, then applies a running maximum
/// from `F(0) = 0` and clamps into `[0, 1]`.
pub fn cdf_grid_from_pdf(pdf: &ForwardPdfEstimate) -> CdfEstimate {
    let mu = pdf.mu_hat();
    let g = pdf.g_values();
    let mut knots = Vec::with_capacity(g.len());
    knots.push(0.0);
    let mut running = 0.0_f64;
    for &gk in &g[1..] {
        running = running.max(1.0 - mu * gk);
        knots.push(running.clamp(0.0, 1.0));
    }
    CdfEstimate {
        t: pdf.interval(),
        knots,
        mu_hat: mu,
    }
}

/// Linear interpolation between knots; constant past `(K-1)t`.
pub fn cdf_at(estimate: &CdfEstimate, x: f64) -> Result<f64, EstimateError> {
    if x.is_nan() || x < 0.0 {
        return Err(EstimateError::InvalidInput(format!(
            "query point must be nonnegative, got {x}"
        )));
    }
    let knots = &estimate.knots;
    let t = estimate.t;
    let last = knots.len() - 1;
    let mut cell = (x / t).floor();
    // Knot positions are k * t; x / t can round to just below an integer.
    if (cell + 1.0) * t <= x {
        cell += 1.0;
    }
    if cell >= last as f64 {
        return Ok(knots[last]);
    }
    let k = cell as usize;
    let (lo, hi) = (knots[k], knots[k + 1]);
    let frac = (x - k as f64 * t) / t;
    Ok((lo + frac * (hi - lo)).clamp(lo, hi))
}
