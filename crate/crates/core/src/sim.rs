//! Weibull renewal traces and their reduction to indicator series.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimator::IndicatorSeries;

/// Largest allowed distance of `T / t` from an integer.
pub const PARTITION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid Weibull parameters: alpha = {alpha}, beta = {beta}")]
    InvalidSpec { alpha: f64, beta: f64 },

    #[error("horizon {horizon} is not an integral multiple of interval {interval}")]
    InvalidPartition { horizon: f64, interval: f64 },

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
}

/// Weibull distribution with `F(x) = 1 - exp[-(x/alpha)^beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct WeibullSpec {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawSpec {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawSpec> for WeibullSpec {
    type Error = SimError;

    fn try_from(raw: RawSpec) -> Result<Self, SimError> {
        WeibullSpec::new(raw.alpha, raw.beta)
    }
}

impl WeibullSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, SimError> {
        let ok = alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0;
        let spec = Self { alpha, beta };
        if ok && weibull_mean(&spec).is_finite() {
            Ok(spec)
        } else {
            Err(SimError::InvalidSpec { alpha, beta })
        }
    }

    /// Scale.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Shape.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.alpha * (-(-p).ln_1p()).powf(1.0 / self.beta)
    }

    /// Maps `u` in (0, 1) to `alpha (-ln u)^(1/beta)`.
    pub fn inverse_transform(&self, u: f64) -> f64 {
        self.alpha * (-u.ln()).powf(1.0 / self.beta)
    }
}

/// The four distributions of the reference study, all with mean close to 1.
pub fn reference_distributions() -> [(&'static str, WeibullSpec); 4] {
    [
        (
            "1",
            WeibullSpec {
                alpha: 1.090,
                beta: 5.0,
            },
        ),
        (
            "2",
            WeibullSpec {
                alpha: 1.009,
                beta: 3.5,
            },
        ),
        (
            "3",
            WeibullSpec {
                alpha: 1.000,
                beta: 1.0,
            },
        ),
        (
            "4",
            WeibullSpec {
                alpha: 0.878,
                beta: 0.8,
            },
        ),
    ]
}

pub fn weibull_cdf(spec: &WeibullSpec, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    -(-(x / spec.alpha).powf(spec.beta)).exp_m1()
}

/// `alpha * Gamma(1 + 1/beta)`.
pub fn weibull_mean(spec: &WeibullSpec) -> f64 {
    spec.alpha * statrs::function::gamma::gamma(1.0 + 1.0 / spec.beta)
}

/// One inter-event time by inverse transform, `U` uniform on the open (0, 1).
pub fn sample_inter_event<R: Rng + ?Sized>(spec: &WeibullSpec, rng: &mut R) -> f64 {
    spec.inverse_transform(Open01.sample(rng))
}

/// Event epochs in `(0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventTrace {
    horizon: f64,
    epochs: Vec<f64>,
}

impl EventTrace {
    pub fn new(horizon: f64, epochs: Vec<f64>) -> Result<Self, SimError> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(SimError::InvalidTrace(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if epochs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SimError::InvalidTrace(
                "epochs not strictly increasing".into(),
            ));
        }
        if epochs.iter().any(|&e| !(e > 0.0 && e <= horizon)) {
            return Err(SimError::InvalidTrace(format!(
                "epoch outside (0, {horizon}]"
            )));
        }
        Ok(Self { horizon, epochs })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn epochs(&self) -> &[f64] {
        &self.epochs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub spec: WeibullSpec,
    pub horizon: f64,
    pub warmup: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.warmup.is_finite() && self.warmup >= 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "warmup must be nonnegative, got {}",
                self.warmup
            )));
        }
        Ok(())
    }
}

/// Renewal process started with an event at `-warmup`; keeps the epochs
/// that land in `(0, T]`.
pub fn simulate_trace(config: &SimConfig) -> Result<EventTrace, SimError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let spec = config.spec;
    let samples = std::iter::repeat_with(move || sample_inter_event(&spec, &mut rng));
    Ok(trace_from_inter_event_times(
        config.horizon,
        config.warmup,
        samples,
    ))
}

/// Accumulates inter-event times from `-warmup` until the running time
/// passes `horizon` or the samples run out.
pub fn trace_from_inter_event_times(
    horizon: f64,
    warmup: f64,
    samples: impl IntoIterator<Item = f64>,
) -> EventTrace {
    let mut epochs = Vec::new();
    let mut clock = -warmup;
    for x in samples {
        clock += x;
        if clock > horizon {
            break;
        }
        // A sample below the clock's ulp collapses onto the previous epoch.
        if clock > 0.0 && epochs.last().is_none_or(|&prev| clock > prev) {
            epochs.push(clock);
        }
    }
    EventTrace { horizon, epochs }
}

/// Number of intervals of length `t` tiling `(0, horizon]`.
pub fn partition_count(horizon: f64, t: f64) -> Result<usize, SimError> {
    let invalid = || SimError::InvalidPartition {
        horizon,
        interval: t,
    };
    if !(t.is_finite() && t > 0.0 && horizon.is_finite() && horizon > 0.0) {
        return Err(invalid());
    }
    let ratio = horizon / t;
    let v = ratio.round();
    if v < 1.0 || (ratio - v).abs() > PARTITION_TOLERANCE {
        return Err(invalid());
    }
    Ok(v as usize)
}

/// `indicators[i]` is `true` iff no epoch lies in `(i t, (i+1) t]`.
pub fn bin_to_indicators(trace: &EventTrace, t: f64) -> Result<IndicatorSeries, SimError> {
    let v = partition_count(trace.horizon(), t)?;
    let mut empty = vec![true; v];
    for &e in trace.epochs() {
        empty[interval_index(e, t).min(v - 1)] = false;
    }
    IndicatorSeries::new(t, empty).map_err(|e| SimError::InvalidTrace(e.to_string()))
}

// Zero-based index i with i t < e <= (i+1) t, measured against the lattice
// points k as f64 * t.
fn interval_index(e: f64, t: f64) -> usize {
    let mut i = (e / t).ceil() - 1.0;
    if i > 0.0 && e <= i * t {
        i -= 1.0;
    }
    if e > (i + 1.0) * t {
        i += 1.0;
    }
    i.max(0.0) as usize
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for run `run` of cell `cell`:
/// `splitmix64(splitmix64(splitmix64(master) ^ cell) ^ run)`.
///
/// Depends only on the three indices, so runs can execute in any order.
pub fn derive_seed(master: u64, cell: u64, run: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ cell) ^ run)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(alpha: f64, beta: f64) -> WeibullSpec {
        WeibullSpec::new(alpha, beta).unwrap()
    }

    #[test]
    fn cdf_values() {
        let e = 1.0 - (-1.0f64).exp();
        assert!((weibull_cdf(&spec(1.0, 1.0), 1.0) - e).abs() < 1e-15);
        assert_eq!(weibull_cdf(&spec(2.0, 0.5), 0.0), 0.0);
        assert!((weibull_cdf(&spec(1.090, 5.0), 1.090) - e).abs() < 1e-15);
    }

    #[test]
    fn reference_means() {
        let expected = [1.001, 0.908, 1.000, 0.995];
        for ((_, s), m) in reference_distributions().iter().zip(expected) {
            assert!((weibull_mean(s) - m).abs() <= 0.001, "{s:?}");
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(WeibullSpec::new(0.0, 1.0).is_err());
        assert!(WeibullSpec::new(1.0, -2.0).is_err());
        assert!(WeibullSpec::new(f64::INFINITY, 1.0).is_err());
        // Gamma(1 + 1/beta) overflows for tiny shapes.
        assert!(WeibullSpec::new(1.0, 1e-3).is_err());
    }

    #[test]
    fn inverse_transform_pins() {
        let s = spec(1.090, 5.0);
        assert!((s.inverse_transform((-1.0f64).exp()) - 1.090).abs() < 1e-12);
        assert!((spec(1.0, 1.0).inverse_transform((-2.0f64).exp()) - 2.0).abs() < 1e-12);
        assert!((s.quantile(weibull_cdf(&s, 0.7)) - 0.7).abs() < 1e-12);
    }

    #[test]
    fn trace_truncation() {
        let tr = trace_from_inter_event_times(1.5, 0.0, [0.4, 0.7, 0.5]);
        assert_eq!(tr.epochs().len(), 2);
        assert!((tr.epochs()[0] - 0.4).abs() < 1e-15);
        assert!((tr.epochs()[1] - 1.1).abs() < 1e-15);
    }

    #[test]
    fn warmup_shifts_origin() {
        let tr = trace_from_inter_event_times(2.0, 1.0, [0.5, 0.75, 0.5, 1.0]);
        assert_eq!(tr.epochs(), &[0.25, 0.75, 1.75]);
    }

    #[test]
    fn seeded_traces_repeat() {
        let cfg = SimConfig {
            spec: spec(0.878, 0.8),
            horizon: 100.0,
            warmup: 50.0,
            seed: 7,
        };
        let a = simulate_trace(&cfg).unwrap();
        assert_eq!(a, simulate_trace(&cfg).unwrap());
        assert!(!a.epochs().is_empty());
        assert!(EventTrace::new(a.horizon(), a.epochs().to_vec()).is_ok());
        let b = simulate_trace(&SimConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn bad_sim_config() {
        let cfg = SimConfig {
            spec: spec(1.0, 1.0),
            horizon: 0.0,
            warmup: 0.0,
            seed: 0,
        };
        assert!(simulate_trace(&cfg).is_err());
        assert!(simulate_trace(&SimConfig {
            horizon: 1.0,
            warmup: -1.0,
            ..cfg
        })
        .is_err());
    }

    #[test]
    fn binning_examples() {
        let tr = EventTrace::new(2.0, vec![0.4, 1.1]).unwrap();
        let s = bin_to_indicators(&tr, 0.5).unwrap();
        assert_eq!(s.indicators(), &[false, true, false, true]);

        let empty = EventTrace::new(1.0, vec![]).unwrap();
        assert_eq!(
            bin_to_indicators(&empty, 0.5).unwrap().indicators(),
            &[true, true]
        );

        assert!(matches!(
            bin_to_indicators(&empty, 0.3),
            Err(SimError::InvalidPartition { .. })
        ));
    }

    #[test]
    fn epoch_on_boundary_belongs_to_left_interval() {
        let t = 0.1;
        let epochs: Vec<f64> = [1, 3, 7, 10].iter().map(|&k| k as f64 * t).collect();
        let tr = EventTrace::new(1.0, epochs).unwrap();
        let s = bin_to_indicators(&tr, t).unwrap();
        let filled: Vec<usize> = (0..10).filter(|&i| !s.indicators()[i]).collect();
        assert_eq!(filled, vec![0, 2, 6, 9]);
    }

    #[test]
    fn epoch_just_past_boundary() {
        let t = 0.5;
        let tr = EventTrace::new(2.0, vec![0.5 + 1e-12, 2.0]).unwrap();
        let s = bin_to_indicators(&tr, t).unwrap();
        assert_eq!(s.indicators(), &[true, false, true, false]);
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_count(50.0, 0.1), Ok(500));
        assert_eq!(partition_count(1000.0, 0.2), Ok(5000));
        assert_eq!(partition_count(1.0, 1.0), Ok(1));
        assert!(partition_count(0.05, 0.1).is_err());
    }

    #[test]
    fn seeds_differ_across_indices() {
        let a = derive_seed(1, 0, 0);
        assert_ne!(a, derive_seed(1, 0, 1));
        assert_ne!(a, derive_seed(1, 1, 0));
        assert_ne!(a, derive_seed(2, 0, 0));
        assert_eq!(a, derive_seed(1, 0, 0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn binning_conserves_events(
                raw in prop::collection::vec(0.0f64..10.0, 0..40),
                t in prop::sample::select(vec![0.1, 0.2, 0.5, 1.0, 2.5]),
            ) {
                let mut epochs: Vec<f64> = raw.into_iter().filter(|&e| e > 0.0).collect();
                epochs.sort_by(f64::total_cmp);
                epochs.dedup();
                let tr = EventTrace::new(10.0, epochs.clone()).unwrap();
                let s = bin_to_indicators(&tr, t).unwrap();
                prop_assert_eq!(s.len(), (10.0 / t).round() as usize);
                let filled = s.indicators().iter().filter(|&&b| !b).count();
                prop_assert!(filled <= epochs.len());
                for &e in &epochs {
                    let i = interval_index(e, t);
                    prop_assert!(!s.indicators()[i]);
                    prop_assert!(i as f64 * t < e && e <= (i + 1) as f64 * t);
                }
            }
        }
    }
}
