//! Statistics across repetitions of one benchmark.

use indexmap::IndexMap;
use thiserror::Error;

use crate::runner::Measurement;

/// Errors from [`compute_statistics`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    /// Aggregates need at least two measurements.
    #[error("cannot aggregate {0} repetition(s); at least 2 are required")]
    TooFewRepetitions(usize),
}

/// Arithmetic mean. When every sample is the same value, that value is
/// returned exactly, so constant series aggregate without rounding noise.
pub fn mean(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty(), "mean of an empty series");
    if is_constant(samples) {
        return samples[0];
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Median: the central sample for odd lengths, the mean of the two central
/// samples for even lengths.
pub fn median(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty(), "median of an empty series");
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

/// Sample standard deviation (the n−1 divisor). A series of fewer than two
/// samples, or one whose samples are all equal, has a standard deviation of
/// exactly zero.
pub fn sample_stddev(samples: &[f64]) -> f64 {
    if samples.len() < 2 || is_constant(samples) {
        return 0.0;
    }
    let m = mean(samples);
    let sum_sq: f64 = samples.iter().map(|x| (x - m) * (x - m)).sum();
    (sum_sq / (samples.len() - 1) as f64).sqrt()
}

fn is_constant(samples: &[f64]) -> bool {
    samples.windows(2).all(|w| w[0] == w[1])
}

/// Computes the `_mean`, `_median`, and `_stddev` aggregate measurements
/// (in that order) over the repetitions of one benchmark.
///
/// All inputs must be successful repetitions of the same instance; errored
/// repetitions are the caller's to exclude. Each aggregate reports the
/// repetition count as its iteration count. Counters are aggregated per
/// name over the repetitions that set them, in first-appearance order.
pub fn compute_statistics(measurements: &[Measurement]) -> Result<Vec<Measurement>, StatsError> {
    if measurements.len() < 2 {
        return Err(StatsError::TooFewRepetitions(measurements.len()));
    }
    debug_assert!(
        measurements.windows(2).all(|w| w[0].name == w[1].name),
        "aggregating measurements of different benchmarks"
    );
    debug_assert!(measurements.iter().all(|m| m.error.is_none()));

    let real: Vec<f64> = measurements.iter().map(|m| m.real_time_per_iter).collect();
    let cpu: Vec<f64> = measurements.iter().map(|m| m.cpu_time_per_iter).collect();

    let mut counter_series: IndexMap<&str, Vec<f64>> = IndexMap::new();
    for m in measurements {
        for (name, value) in &m.counters {
            counter_series.entry(name).or_default().push(*value);
        }
    }

    let stats: [(&str, fn(&[f64]) -> f64); 3] = [
        ("_mean", mean),
        ("_median", median),
        ("_stddev", sample_stddev),
    ];
    Ok(stats
        .iter()
        .map(|(suffix, stat)| Measurement {
            name: format!("{}{}", measurements[0].name, suffix),
            iterations: measurements.len() as u64,
            real_time_per_iter: stat(&real),
            cpu_time_per_iter: stat(&cpu),
            counters: counter_series
                .iter()
                .map(|(name, series)| ((*name).to_owned(), stat(series)))
                .collect(),
            error: None,
        })
        .collect())
}
