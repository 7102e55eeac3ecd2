#![allow(dead_code)]

use indicator_cdf::IndicatorSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Overlapping-window survival straight from the definition: for each lag k,
/// test every window of k consecutive intervals.
pub fn brute_force_survival(indicators: &[bool]) -> Vec<f64> {
    let v = indicators.len();
    let mut out = vec![1.0];
    for k in 1..=v {
        let windows = v - k + 1;
        let count = (0..windows)
            .filter(|&i| (i..i + k).all(|j| indicators[j]))
            .count();
        out.push(count as f64 / windows as f64);
    }
    out
}

/// Random series with a per-series probability of an empty interval, so
/// both sparse and dense event patterns show up.
pub fn random_series(rng: &mut ChaCha8Rng, max_len: usize) -> IndicatorSeries {
    let len = rng.random_range(1..=max_len);
    let p_empty: f64 = rng.random_range(0.05..0.95);
    let t = [0.1, 0.2, 0.5, 1.0, 2.0][rng.random_range(0..5)];
    let bits = (0..len).map(|_| rng.random_bool(p_empty)).collect();
    IndicatorSeries::new(t, bits).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Forward-recurrence Cdf G(x) = (1/mu) * integral_0^x (1 - F(u)) du by
/// composite Simpson, with mu from the same quadrature out to a far cutoff.
pub fn forward_recurrence_cdf(alpha: f64, beta: f64, xs: &[f64]) -> Vec<f64> {
    let surv = |u: f64| (-(u / alpha).powf(beta)).exp();
    let simpson = |a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut s = surv(a) + surv(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * surv(a + i as f64 * h);
        }
        s * h / 3.0
    };
    let mu = simpson(0.0, 60.0 * alpha, 600_000);
    xs.iter().map(|&x| simpson(0.0, x, 20_000) / mu).collect()
}
