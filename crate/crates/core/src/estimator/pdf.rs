use serde::{Deserialize, Serialize};

use super::{EstimateError, SurvivalCurve};

/// Forward-recurrence pdf estimate `g(kt)` on `k = 0..K-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardPdfEstimate {
    pub(super) t: f64,
    pub(super) cutoff: usize,
    pub(super) g_values: Vec<f64>,
    pub(super) mu_hat: f64,
}

impl ForwardPdfEstimate {
    pub fn interval(&self) -> f64 {
        self.t
    }

    /// The cutoff `K`; `g` is taken to vanish from `(K-1)t` onwards.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `g(0), g(t), ..., g((K-1)t)`.
    pub fn g_values(&self) -> &[f64] {
        &self.g_values
    }

    /// Estimated mean inter-event time.
    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    /// `g(0) t/2 + sum_{k=1}^{K-2} g(kt) t`, which should equal 1.
    pub fn trapezoid_mass(&self) -> f64 {
        let interior: f64 = self.g_values[1..self.cutoff - 1].iter().sum();
        self.g_values[0] * self.t / 2.0 + interior * self.t
    }
}

/// Smallest `K >= 2` with `p((K-2)t) = p((K-1)t) = p(Kt) = 0`.
///
/// Fails with [`EstimateError::HorizonInsufficient`] when the curve has no
/// three consecutive zeros.
pub fn determine_cutoff(curve: &SurvivalCurve) -> Result<usize, EstimateError> {
    let p = curve.values();
    // p(0) = 1, so the earliest possible triple is indices 1, 2, 3.
    p.windows(3)
        .position(|w| w.iter().all(|&x| x == 0.0))
        .map(|start| start + 2)
        .ok_or_else(|| EstimateError::HorizonInsufficient {
            last_zero: p.iter().rposition(|&x| x == 0.0),
        })
}

/// Centered-difference pdf with trapezoid normalization.
///
/// `g(kt) = [p((k-1)t) - p((k+1)t)] / 2t` for `k = 1..K-1`, then
/// `mu = t / [2 (1 - sum_{k=1}^{K-2} g(kt) t)]` and `g(0) = 1/mu`.
pub fn pdf_from_survival(
    curve: &SurvivalCurve,
    cutoff: usize,
) -> Result<ForwardPdfEstimate, EstimateError> {
    let p = curve.values();
    let t = curve.interval();
    if cutoff < 2 || cutoff > curve.max_index() {
        return Err(EstimateError::InvalidInput(format!(
            "cutoff K = {cutoff} outside 2..={}",
            curve.max_index()
        )));
    }

    let mut g_values = vec![0.0; cutoff];
    for k in 1..cutoff {
        g_values[k] = (p[k - 1] - p[k + 1]) / (2.0 * t);
    }

    let interior_mass: f64 = g_values[1..cutoff - 1].iter().sum::<f64>() * t;
    let remainder = 1.0 - interior_mass;
    if remainder.is_nan() || remainder <= 0.0 {
        return Err(EstimateError::DegenerateNormalization { sum: interior_mass });
    }
    let mu_hat = t / (2.0 * remainder);
    g_values[0] = 1.0 / mu_hat;

    Ok(ForwardPdfEstimate {
        t,
        cutoff,
        g_values,
        mu_hat,
    })
}
