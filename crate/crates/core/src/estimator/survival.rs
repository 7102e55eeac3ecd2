use serde::{Deserialize, Serialize};

use super::EstimateError;

/// Per-interval indicators observed by periodic inspection.
///
/// `indicators[i]` is `true` when no event occurred in the interval
/// `(i*t, (i+1)*t]` (zero-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSeries {
    t: f64,
    indicators: Vec<bool>,
}

impl IndicatorSeries {
    pub fn new(t: f64, indicators: Vec<bool>) -> Result<Self, EstimateError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(EstimateError::InvalidInput(format!(
                "interval length must be positive and finite, got {t}"
            )));
        }
        if indicators.is_empty() {
            return Err(EstimateError::InvalidInput(
                "indicator sequence is empty".to_string(),
            ));
        }
        Ok(Self { t, indicators })
    }

    pub fn interval(&self) -> f64 {
        self.t
    }

    pub fn indicators(&self) -> &[bool] {
        &self.indicators
    }

    /// Number of observation intervals `v`.
    pub fn len(&self) -> usize {
        self.indicators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indicators.is_empty()
    }

    /// Observation period `v * t`.
    pub fn horizon(&self) -> f64 {
        self.len() as f64 * self.t
    }
}

/// Estimated forward-recurrence survival `p(kt)` for `k = 0..=v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalCurve {
    t: f64,
    values: Vec<f64>,
}

impl SurvivalCurve {
    /// Builds a curve from explicit values, checking `p(0) = 1`, bounds and
    /// monotonicity.
    pub fn new(t: f64, values: Vec<f64>) -> Result<Self, EstimateError> {
        if !(t.is_finite() && t > 0.0) {
            return Err(EstimateError::InvalidInput(format!(
                "interval length must be positive and finite, got {t}"
            )));
        }
        if values.len() < 2 {
            return Err(EstimateError::InvalidInput(
                "survival curve needs at least p(0) and p(t)".to_string(),
            ));
        }
        if values[0] != 1.0 {
            return Err(EstimateError::InvalidInput(format!(
                "p(0) must be 1, got {}",
                values[0]
            )));
        }
        if let Some(k) = values.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(EstimateError::InvalidInput(format!(
                "p({k}t) = {} outside [0, 1]",
                values[k]
            )));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] > w[0]) {
            return Err(EstimateError::InvalidInput(format!(
                "survival curve increases between k = {k} and k = {}",
                k + 1
            )));
        }
        Ok(Self { t, values })
    }

    pub fn interval(&self) -> f64 {
        self.t
    }

    /// `p(0), p(t), ..., p(vt)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest lattice index `v`.
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// Overlapping-window survival estimate.
///
/// `p(kt)` is the fraction of the `v - k + 1` windows of `k` consecutive
/// intervals in which every indicator is `true`. A maximal run of `L` empty
/// intervals contributes `max(0, L - k + 1)` such windows, so the window
/// counts for all lags follow from the run-length histogram with two suffix
/// sums. Counts are exact integers; the only rounding is the final division.
pub fn survival_from_indicators(series: &IndicatorSeries) -> SurvivalCurve {
    let v = series.len();

    // run_hist[L] = number of maximal runs of `true` with length L.
    let mut run_hist = vec![0u64; v + 1];
    let mut run = 0usize;
    for &empty in series.indicators() {
        if empty {
            run += 1;
        } else if run > 0 {
            run_hist[run] += 1;
            run = 0;
        }
    }
    if run > 0 {
        run_hist[run] += 1;
    }

    // windows(k) = sum_{L >= k} (L - k + 1) * n_L
    //            = sum_{L >= k} L * n_L - (k - 1) * sum_{L >= k} n_L
    let mut values = vec![0.0; v + 1];
    values[0] = 1.0;
    let mut runs_at_least = 0u64;
    let mut length_at_least = 0u64;
    for k in (1..=v).rev() {
        runs_at_least += run_hist[k];
        length_at_least += k as u64 * run_hist[k];
        let windows = length_at_least - (k as u64 - 1) * runs_at_least;
        values[k] = windows as f64 / (v - k + 1) as f64;
    }

    SurvivalCurve {
        t: series.interval(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct definition: count windows of k consecutive `true`s.
    fn brute_force(series: &IndicatorSeries) -> Vec<f64> {
        let a = series.indicators();
        let v = a.len();
        let mut out = vec![1.0];
        for k in 1..=v {
            let count = (0..=v - k)
                .filter(|&i| a[i..i + k].iter().all(|&b| b))
                .count();
            out.push(count as f64 / (v - k + 1) as f64);
        }
        out
    }

    fn series(bits: &[bool]) -> IndicatorSeries {
        IndicatorSeries::new(1.0, bits.to_vec()).unwrap()
    }

    #[test]
    fn all_empty_intervals() {
        let c = survival_from_indicators(&series(&[true, true, true]));
        assert_eq!(c.values(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn every_interval_has_events() {
        let c = survival_from_indicators(&series(&[false, false]));
        assert_eq!(c.values(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn mixed_series_matches_hand_enumeration() {
        let s = series(&[true, true, false, true]);
        let c = survival_from_indicators(&s);
        assert_eq!(c.values(), &[1.0, 0.75, 1.0 / 3.0, 0.0, 0.0]);
        assert_eq!(c.values(), brute_force(&s).as_slice());
    }

    #[test]
    fn empty_series_rejected() {
        assert!(matches!(
            IndicatorSeries::new(1.0, vec![]),
            Err(EstimateError::InvalidInput(_))
        ));
        assert!(IndicatorSeries::new(0.0, vec![true]).is_err());
        assert!(IndicatorSeries::new(f64::NAN, vec![true]).is_err());
    }

    #[test]
    fn curve_validation() {
        assert!(SurvivalCurve::new(1.0, vec![1.0, 0.5, 0.6]).is_err());
        assert!(SurvivalCurve::new(1.0, vec![0.9, 0.5]).is_err());
        assert!(SurvivalCurve::new(1.0, vec![1.0, -0.1]).is_err());
        assert!(SurvivalCurve::new(1.0, vec![1.0, 0.5, 0.25, 0.0]).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn run_length_equals_brute_force(bits in prop::collection::vec(any::<bool>(), 1..64)) {
                let s = series(&bits);
                let fast = survival_from_indicators(&s);
                let slow = brute_force(&s);
                prop_assert_eq!(fast.values(), slow.as_slice());
            }

            #[test]
            fn curve_is_monotone_and_bounded(bits in prop::collection::vec(any::<bool>(), 1..300)) {
                let c = survival_from_indicators(&series(&bits));
                prop_assert_eq!(c.values()[0], 1.0);
                prop_assert!(c.values().iter().all(|p| (0.0..=1.0).contains(p)));
                prop_assert!(c.values().windows(2).all(|w| w[1] <= w[0]));
            }
        }
    }
}
