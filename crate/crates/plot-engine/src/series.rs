//! Series extraction from results documents, plus least-squares fitting.

use results_model::{compile_regex, BenchmarkRecord, ResultsDocument};

use crate::error::PlotError;
use crate::spec::SeriesSpec;

/// One plotted point: the center and spread of all samples sharing an x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointStats {
    pub x: f64,
    /// Mean of the samples at this x.
    pub y: f64,
    /// Sample standard deviation of those samples; 0 for a single sample.
    pub yerr: f64,
}

/// An extracted series, ready to render.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    pub label: String,
    /// Grouped points, sorted by x ascending.
    pub points: Vec<PointStats>,
    /// The ungrouped (x, y) samples behind the points, in the same sorted
    /// order — regression fits use these so that the number of samples at
    /// each x weights the fit naturally.
    pub samples: Vec<(f64, f64)>,
}

impl SeriesData {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn strip_aggregate_suffix(name: &str) -> &str {
    for suffix in ["_mean", "_median", "_stddev"] {
        if let Some(stripped) = name.strip_suffix(suffix) {
            return stripped;
        }
    }
    name
}

/// Resolves a field selector against one record.
///
/// Selectors: the fixed fields `real_time`, `cpu_time`, `iterations`; any
/// counter name; or `name_arg<k>`, the k-th slash-separated integer
/// argument of the benchmark name (aggregate suffixes ignored), so
/// `Copy/4096` and `Copy/4096_mean` both give `name_arg0` = 4096.
fn field_value(record: &BenchmarkRecord, field: &str) -> Option<f64> {
    match field {
        "real_time" => Some(record.real_time),
        "cpu_time" => Some(record.cpu_time),
        "iterations" => Some(record.iterations as f64),
        _ => {
            if let Some(k) = field.strip_prefix("name_arg") {
                let k: usize = k.parse().ok()?;
                let base = strip_aggregate_suffix(&record.name);
                let arg = base.split('/').nth(k + 1)?;
                arg.parse::<i64>().ok().map(|v| v as f64)
            } else {
                record.counters.get(field).copied()
            }
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

/// Extracts a series from a document: filter by regex, drop errored
/// records, resolve both fields, scale, group identical x values into
/// (mean, stddev) points sorted by x.
///
/// A filter that matches nothing (or matches only records missing a
/// field on a per-record basis) yields an empty series, not an error;
/// but when *no* matched record carries `xfield` (or `yfield`) at all,
/// that misspelled field is reported as [`PlotError::MissingField`].
pub fn build_series(ss: &SeriesSpec, doc: &ResultsDocument) -> Result<SeriesData, PlotError> {
    let regex = compile_regex(&ss.regex)?;
    let matched: Vec<&BenchmarkRecord> = doc
        .benchmarks
        .iter()
        .filter(|r| !r.error_occurred && regex.is_match(&r.name))
        .collect();

    if !matched.is_empty() {
        for field in [&ss.xfield, &ss.yfield] {
            if !matched.iter().any(|r| field_value(r, field).is_some()) {
                return Err(PlotError::MissingField(field.clone()));
            }
        }
    }

    let mut samples: Vec<(f64, f64)> = matched
        .iter()
        .filter_map(|r| {
            let x = field_value(r, &ss.xfield)?;
            let y = field_value(r, &ss.yfield)?;
            Some((x * ss.xscale, y * ss.yscale))
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut points = Vec::new();
    let mut i = 0;
    while i < samples.len() {
        let x = samples[i].0;
        let mut ys = Vec::new();
        while i < samples.len() && samples[i].0 == x {
            ys.push(samples[i].1);
            i += 1;
        }
        points.push(PointStats {
            x,
            y: mean(&ys),
            yerr: sample_stddev(&ys),
        });
    }

    Ok(SeriesData {
        label: ss.label.clone(),
        points,
        samples,
    })
}

/// Ordinary least squares over raw samples: returns `(slope, intercept)`.
///
/// Needs at least two samples with at least two distinct x values;
/// anything less is [`PlotError::DegenerateRegression`].
pub fn linear_regression(samples: &[(f64, f64)]) -> Result<(f64, f64), PlotError> {
    if samples.len() < 2 || samples.iter().all(|(x, _)| *x == samples[0].0) {
        return Err(PlotError::DegenerateRegression);
    }
    let n = samples.len() as f64;
    let x_bar = samples.iter().map(|(x, _)| x).sum::<f64>() / n;
    let y_bar = samples.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in samples {
        sxy += (x - x_bar) * (y - y_bar);
        sxx += (x - x_bar) * (x - x_bar);
    }
    let slope = sxy / sxx;
    Ok((slope, y_bar - slope * x_bar))
}
