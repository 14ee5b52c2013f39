//! The adaptive-iteration runner.

use indexmap::IndexMap;
use results_model::{
    compile_regex, BenchmarkRecord, ResultsDocument, RunContext, RunType, TimeUnit,
};

use crate::clock::Clock;
use crate::registry::{InstanceRef, Registry};
use crate::state::{BenchState, CounterKind};
use crate::stats::compute_statistics;

/// Hard ceiling on the iteration count of a single batch.
pub const MAX_ITERATIONS: u64 = 1_000_000_000;

/// Global run options, before per-benchmark overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Unanchored regular expression selecting which instances run.
    pub filter: String,
    /// Minimum measured running time per repetition, in seconds.
    pub min_time: f64,
    /// Number of repetitions per instance.
    pub repetitions: u32,
    /// When repetitions produce aggregates, drop the per-repetition rows
    /// and keep only the aggregates.
    pub report_aggregates_only: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            filter: ".*".to_owned(),
            min_time: 0.5,
            repetitions: 1,
            report_aggregates_only: false,
        }
    }
}

/// The outcome of deciding what to do after a timed batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationDecision {
    /// The batch was long enough (or the cap was hit); report it.
    Done,
    /// Run another batch with this many iterations.
    Next(u64),
}

/// Decides whether a batch of `prev_iters` iterations that took `elapsed`
/// seconds satisfies `min_time`, and if not, how many iterations the next
/// batch should run.
///
/// The next batch grows by `1.4 × min_time ⁄ elapsed`, clamped to [2, 10] —
/// a multiplier aimed slightly past `min_time` so the loop usually ends on
/// the next batch, without overshooting a slow benchmark by an order of
/// magnitude. A batch too fast to measure at all grows tenfold. Growth is
/// truncated to whole iterations but always moves forward by at least one,
/// and never past [`MAX_ITERATIONS`].
pub fn decide_iterations(prev_iters: u64, elapsed: f64, min_time: f64) -> IterationDecision {
    if elapsed >= min_time || prev_iters >= MAX_ITERATIONS {
        return IterationDecision::Done;
    }
    let next = if elapsed <= 0.0 {
        prev_iters.saturating_mul(10)
    } else {
        let growth = (1.4 * min_time / elapsed).clamp(2.0, 10.0);
        (prev_iters as f64 * growth) as u64
    };
    IterationDecision::Next(next.clamp(prev_iters + 1, MAX_ITERATIONS))
}

/// One fully measured repetition (or aggregate) of a benchmark instance,
/// in seconds-per-iteration units.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// Instance name, plus an aggregate suffix for aggregate rows.
    pub name: String,
    /// Iterations in the reported batch (repetition count for aggregates).
    pub iterations: u64,
    /// Wall (or manual) seconds per iteration.
    pub real_time_per_iter: f64,
    /// CPU seconds per iteration.
    pub cpu_time_per_iter: f64,
    /// Normalized user counters, in first-set order.
    pub counters: IndexMap<String, f64>,
    /// The failure message, if the repetition errored.
    pub error: Option<String>,
}

struct BatchOutcome {
    iterations: u64,
    wall_seconds: f64,
    cpu_seconds: f64,
    manual_seconds: f64,
    counters: IndexMap<String, (f64, CounterKind)>,
    error: Option<String>,
}

fn run_batch(instance: InstanceRef<'_>, iterations: u64, clock: &dyn Clock) -> BatchOutcome {
    let def = instance.definition();
    let mut state = BenchState::new(iterations, instance.args(), def.uses_manual_time(), clock);
    let wall_start = clock.wall_now_ns();
    let cpu_start = clock.cpu_now_ns();
    (def.body())(&mut state);
    let wall_ns = clock.wall_now_ns() - wall_start;
    let cpu_ns = clock.cpu_now_ns() - cpu_start;
    BatchOutcome {
        iterations,
        wall_seconds: wall_ns / 1e9,
        cpu_seconds: cpu_ns / 1e9,
        manual_seconds: state.manual_time_accumulated(),
        error: state.error().map(str::to_owned),
        counters: state.counters().clone(),
    }
}

fn finalize_batch(name: &str, manual: bool, batch: BatchOutcome) -> Measurement {
    if let Some(message) = batch.error {
        return Measurement {
            name: name.to_owned(),
            iterations: batch.iterations,
            real_time_per_iter: 0.0,
            cpu_time_per_iter: 0.0,
            counters: IndexMap::new(),
            error: Some(message),
        };
    }
    let iters = batch.iterations as f64;
    let total_seconds = if manual {
        batch.manual_seconds
    } else {
        batch.wall_seconds
    };
    let counters = batch
        .counters
        .into_iter()
        .map(|(counter, (value, kind))| {
            let reported = match kind {
                CounterKind::Plain => value,
                CounterKind::Rate => {
                    if total_seconds > 0.0 {
                        value / total_seconds
                    } else {
                        0.0
                    }
                }
                CounterKind::AvgIterations => value / iters,
            };
            (counter, reported)
        })
        .collect();
    Measurement {
        name: name.to_owned(),
        iterations: batch.iterations,
        real_time_per_iter: total_seconds / iters,
        cpu_time_per_iter: batch.cpu_seconds / iters,
        counters,
        error: None,
    }
}

/// Runs one benchmark instance: `repetitions` independent repetitions, each
/// growing its batch size adaptively until the driving time (manual time
/// for manual benchmarks, wall time otherwise) reaches the effective
/// minimum. Per-definition overrides take precedence over `config`.
///
/// Returns one [`Measurement`] per repetition, in order. An errored
/// repetition yields an errored measurement and the remaining repetitions
/// still run.
pub fn run_one(
    instance: InstanceRef<'_>,
    config: &RunConfig,
    clock: &dyn Clock,
) -> Vec<Measurement> {
    let def = instance.definition();
    let min_time = def.min_time_override().unwrap_or(config.min_time);
    let repetitions = def.repetitions_override().unwrap_or(config.repetitions);
    let manual = def.uses_manual_time();

    (0..repetitions)
        .map(|_| {
            let mut iterations = 1u64;
            loop {
                let batch = run_batch(instance, iterations, clock);
                if batch.error.is_some() {
                    return finalize_batch(instance.name(), manual, batch);
                }
                let driving = if manual {
                    batch.manual_seconds
                } else {
                    batch.wall_seconds
                };
                match decide_iterations(iterations, driving, min_time) {
                    IterationDecision::Done => {
                        return finalize_batch(instance.name(), manual, batch)
                    }
                    IterationDecision::Next(next) => iterations = next,
                }
            }
        })
        .collect()
}

fn measurement_to_record(m: &Measurement, run_type: RunType) -> BenchmarkRecord {
    let mut record = BenchmarkRecord::new(m.name.clone());
    record.run_type = run_type;
    record.iterations = m.iterations;
    record.real_time = m.real_time_per_iter * 1e9;
    record.cpu_time = m.cpu_time_per_iter * 1e9;
    record.time_unit = TimeUnit::Ns;
    record.counters = m.counters.clone();
    if let Some(message) = &m.error {
        record.error_occurred = true;
        record.error_message = Some(message.clone());
    }
    record
}

fn aggregate_to_record(m: &Measurement) -> BenchmarkRecord {
    measurement_to_record(m, RunType::Aggregate)
}

/// Runs every registry instance whose name matches `config.filter` and
/// assembles the results document.
///
/// Per-repetition rows come first for each instance (unless
/// `report_aggregates_only`), followed by its `_mean`/`_median`/`_stddev`
/// aggregates whenever at least two repetitions succeeded.
pub fn run_filtered(
    registry: &Registry,
    config: &RunConfig,
    clock: &dyn Clock,
    context: RunContext,
) -> Result<ResultsDocument, results_model::Error> {
    let regex = compile_regex(&config.filter)?;
    let mut benchmarks = Vec::new();
    for instance in registry.instances() {
        if !regex.is_match(instance.name()) {
            continue;
        }
        let measurements = run_one(instance, config, clock);
        let successes: Vec<Measurement> = measurements
            .iter()
            .filter(|m| m.error.is_none())
            .cloned()
            .collect();
        let aggregates = if measurements.len() >= 2 && successes.len() >= 2 {
            compute_statistics(&successes).expect("at least two successful repetitions")
        } else {
            Vec::new()
        };
        if !(config.report_aggregates_only && !aggregates.is_empty()) {
            benchmarks.extend(
                measurements
                    .iter()
                    .map(|m| measurement_to_record(m, RunType::Iteration)),
            );
        }
        benchmarks.extend(aggregates.iter().map(aggregate_to_record));
    }
    Ok(ResultsDocument {
        context,
        benchmarks,
    })
}

/// Lists the instance names that `config.filter` selects, in registration
/// order.
pub fn list_benchmarks(
    registry: &Registry,
    config: &RunConfig,
) -> Result<Vec<String>, results_model::Error> {
    let regex = compile_regex(&config.filter)?;
    Ok(registry
        .instances()
        .filter(|inst| regex.is_match(inst.name()))
        .map(|inst| inst.name().to_owned())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clock::FakeClock;
    use crate::registry::BenchmarkDefinition;
    use crate::state::CounterKind;

    fn spin(state: &mut BenchState) {
        while state.keep_running() {}
    }

    fn single_instance_registry(def: BenchmarkDefinition) -> Registry {
        let mut registry = Registry::new();
        registry.register_benchmark(def).unwrap();
        registry.freeze();
        registry
    }

    #[test]
    fn decide_iterations_frozen_examples() {
        // Met the budget exactly.
        assert_eq!(decide_iterations(100, 0.5, 0.5), IterationDecision::Done);
        // At the cap, even when under budget.
        assert_eq!(
            decide_iterations(MAX_ITERATIONS, 0.0, 0.5),
            IterationDecision::Done
        );
        // Unmeasurably fast batch grows tenfold.
        assert_eq!(decide_iterations(7, 0.0, 0.5), IterationDecision::Next(70));
        // 1.4 × 0.5 / 0.001 = 700, clamped to the 10× ceiling.
        assert_eq!(
            decide_iterations(1, 0.001, 0.5),
            IterationDecision::Next(10)
        );
        // 1.4 × 0.5 / 0.4 = 1.75, clamped up to the 2× floor.
        assert_eq!(
            decide_iterations(50, 0.4, 0.5),
            IterationDecision::Next(100)
        );
        // 1.4 × 0.5 / 0.25 = 2.8; 1 × 2.8 truncates to 2.
        assert_eq!(decide_iterations(1, 0.25, 0.5), IterationDecision::Next(2));
        // Truncation would stall at prev; the +1 floor forces progress.
        // (growth 2.0 exactly: 3 × 2 = 6.)
        assert_eq!(decide_iterations(3, 0.35, 0.5), IterationDecision::Next(6));
        // Never past the cap.
        assert_eq!(
            decide_iterations(900_000_000, 0.001, 0.5),
            IterationDecision::Next(MAX_ITERATIONS)
        );
    }

    #[test]
    fn fake_clock_run_reaches_min_time_with_exact_per_iteration_cost() {
        // 1 ms per iteration, 0.1 s minimum: 1 → 10 → 100 iterations, and
        // the 100-iteration batch takes exactly 0.1 s.
        let registry = single_instance_registry(BenchmarkDefinition::new("Spin", spin));
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.1,
            ..RunConfig::default()
        };
        let ms = run_one(registry.instance("Spin").unwrap(), &config, &clock);
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].iterations, 100);
        assert_eq!(ms[0].real_time_per_iter, 0.001);
        assert_eq!(ms[0].cpu_time_per_iter, 0.001);
        assert!(ms[0].error.is_none());
    }

    #[test]
    fn emitted_record_times_are_in_nanoseconds() {
        let registry = single_instance_registry(BenchmarkDefinition::new("Spin", spin));
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.1,
            ..RunConfig::default()
        };
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        assert_eq!(doc.benchmarks.len(), 1);
        let record = &doc.benchmarks[0];
        assert_eq!(record.name, "Spin");
        assert_eq!(record.run_type, RunType::Iteration);
        assert_eq!(record.iterations, 100);
        // 0.001 s/iteration scales to exactly 1e6 ns (the scaling error is
        // far below a half-ulp at 1e6).
        assert_eq!(record.real_time, 1_000_000.0);
        assert_eq!(record.cpu_time, 1_000_000.0);
        assert_eq!(record.time_unit, TimeUnit::Ns);
    }

    #[test]
    fn manual_time_drives_the_loop_and_the_reported_real_time() {
        // The body claims 2 ms per iteration; the fake wall clock claims
        // 5 ms. With min_time 4 ms the manual budget needs 2 iterations,
        // and real_time must come from the manual measurements while
        // cpu_time still comes from the clock.
        fn body(state: &mut BenchState) {
            while state.keep_running() {
                state.set_iteration_time(0.002);
            }
        }
        let registry =
            single_instance_registry(BenchmarkDefinition::new("Manual", body).manual_time());
        let clock = FakeClock::new(5_000_000);
        let config = RunConfig {
            min_time: 0.004,
            ..RunConfig::default()
        };
        let ms = run_one(registry.instance("Manual").unwrap(), &config, &clock);
        assert_eq!(ms[0].iterations, 2);
        assert_eq!(ms[0].real_time_per_iter, 0.002);
        assert_eq!(ms[0].cpu_time_per_iter, 0.005);
    }

    #[test]
    fn counter_kinds_normalize_as_reported() {
        fn body(state: &mut BenchState) {
            while state.keep_running() {
                state.set_iteration_time(1.0);
            }
            state.set_counter("bytes", 1024.0, CounterKind::Rate);
            state.set_counter("reads", 100.0, CounterKind::AvgIterations);
            state.set_counter("threads", 4.0, CounterKind::Plain);
        }
        let registry =
            single_instance_registry(BenchmarkDefinition::new("Counters", body).manual_time());
        let clock = FakeClock::new(1);
        let ms = run_one(
            registry.instance("Counters").unwrap(),
            &RunConfig::default(),
            &clock,
        );
        // One 1-second manual iteration satisfies the 0.5 s default budget.
        assert_eq!(ms[0].iterations, 1);
        assert_eq!(ms[0].counters["bytes"], 1024.0);
        assert_eq!(ms[0].counters["reads"], 100.0);
        assert_eq!(ms[0].counters["threads"], 4.0);
        let keys: Vec<&str> = ms[0].counters.keys().map(String::as_str).collect();
        assert_eq!(keys, ["bytes", "reads", "threads"]);
    }

    #[test]
    fn rate_counter_with_zero_elapsed_reports_zero() {
        // A manual-time body that never reports any time: every batch has
        // zero driving time, so the runner escalates straight to the
        // iteration cap and the rate must degrade to 0, not NaN.
        fn body(state: &mut BenchState) {
            state.set_counter("bytes", 1024.0, CounterKind::Rate);
        }
        let registry =
            single_instance_registry(BenchmarkDefinition::new("ZeroRate", body).manual_time());
        let clock = FakeClock::new(1);
        let ms = run_one(
            registry.instance("ZeroRate").unwrap(),
            &RunConfig::default(),
            &clock,
        );
        assert_eq!(ms[0].counters["bytes"], 0.0);
        assert_eq!(ms[0].iterations, MAX_ITERATIONS);
        assert_eq!(ms[0].real_time_per_iter, 0.0);
    }

    #[test]
    fn errored_repetition_reports_the_error_and_later_benchmarks_still_run() {
        let mut registry = Registry::new();
        registry
            .register_benchmark(BenchmarkDefinition::new("Fails", |state| {
                while state.keep_running() {
                    state.set_error("resource unavailable");
                }
                state.set_counter("bytes", 1.0, CounterKind::Plain);
            }))
            .unwrap();
        registry
            .register_benchmark(BenchmarkDefinition::new("Works", spin))
            .unwrap();
        registry.freeze();
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.01,
            ..RunConfig::default()
        };
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        assert_eq!(doc.benchmarks.len(), 2);
        let failed = &doc.benchmarks[0];
        assert_eq!(failed.name, "Fails");
        assert!(failed.error_occurred);
        assert_eq!(
            failed.error_message.as_deref(),
            Some("resource unavailable")
        );
        assert_eq!(failed.real_time, 0.0);
        assert!(failed.counters.is_empty());
        assert_eq!(doc.benchmarks[1].name, "Works");
        assert!(!doc.benchmarks[1].error_occurred);
    }

    #[test]
    fn repetitions_append_aggregates_in_fixed_order() {
        let registry = single_instance_registry(BenchmarkDefinition::new("Spin", spin));
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.01,
            repetitions: 3,
            ..RunConfig::default()
        };
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        let names: Vec<&str> = doc.benchmarks.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "Spin",
                "Spin",
                "Spin",
                "Spin_mean",
                "Spin_median",
                "Spin_stddev"
            ]
        );
        assert!(doc.benchmarks[..3]
            .iter()
            .all(|b| b.run_type == RunType::Iteration));
        assert!(doc.benchmarks[3..]
            .iter()
            .all(|b| b.run_type == RunType::Aggregate && b.iterations == 3));
        // A deterministic clock makes every repetition identical: the mean
        // equals the per-repetition value (1 ms/iteration) and the spread
        // collapses to exactly zero.
        assert_eq!(doc.benchmarks[3].real_time, doc.benchmarks[0].real_time);
        assert_eq!(doc.benchmarks[3].real_time, 1_000_000.0);
        assert_eq!(doc.benchmarks[5].real_time, 0.0);
        assert_eq!(doc.benchmarks[5].cpu_time, 0.0);
    }

    #[test]
    fn report_aggregates_only_drops_per_repetition_rows() {
        let registry = single_instance_registry(BenchmarkDefinition::new("Spin", spin));
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.01,
            repetitions: 3,
            report_aggregates_only: true,
            ..RunConfig::default()
        };
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        let names: Vec<&str> = doc.benchmarks.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, ["Spin_mean", "Spin_median", "Spin_stddev"]);
    }

    #[test]
    fn report_aggregates_only_keeps_rows_when_no_aggregates_exist() {
        // With a single repetition there are no aggregates to keep, so the
        // per-repetition row must survive even under aggregates-only.
        let registry = single_instance_registry(BenchmarkDefinition::new("Spin", spin));
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.01,
            report_aggregates_only: true,
            ..RunConfig::default()
        };
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        assert_eq!(doc.benchmarks.len(), 1);
        assert_eq!(doc.benchmarks[0].name, "Spin");
    }

    #[test]
    fn aggregates_cover_only_successful_repetitions() {
        // Fail exactly the second of four repetitions. Each repetition
        // starts with a fresh 1-iteration batch, so counting those batches
        // identifies the current repetition.
        use std::sync::atomic::{AtomicU32, Ordering};
        static REP: AtomicU32 = AtomicU32::new(0);
        REP.store(0, Ordering::SeqCst);
        fn flaky(state: &mut BenchState) {
            if state.iterations() == 1 {
                REP.fetch_add(1, Ordering::SeqCst);
            }
            let failing = REP.load(Ordering::SeqCst) == 2;
            while state.keep_running() {
                if failing {
                    state.set_error("transient failure");
                }
            }
        }
        let registry = single_instance_registry(BenchmarkDefinition::new("Flaky", flaky));
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.01,
            repetitions: 4,
            ..RunConfig::default()
        };
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        let names: Vec<&str> = doc.benchmarks.iter().map(|b| b.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "Flaky",
                "Flaky",
                "Flaky",
                "Flaky",
                "Flaky_mean",
                "Flaky_median",
                "Flaky_stddev"
            ]
        );
        assert!(doc.benchmarks[1].error_occurred);
        // Aggregates span the three successful repetitions only.
        assert!(doc.benchmarks[4..].iter().all(|b| b.iterations == 3));
    }

    #[test]
    fn filter_selects_and_bad_filter_reports() {
        let mut registry = Registry::new();
        registry
            .register_benchmark(BenchmarkDefinition::new("Copy", spin).arg(8).arg(64))
            .unwrap();
        registry
            .register_benchmark(BenchmarkDefinition::new("Noop", spin))
            .unwrap();
        registry.freeze();
        let config = RunConfig {
            filter: "Copy/8$".to_owned(),
            min_time: 0.01,
            ..RunConfig::default()
        };
        assert_eq!(list_benchmarks(&registry, &config).unwrap(), ["Copy/8"]);
        let clock = FakeClock::new(1_000_000);
        let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
        assert_eq!(doc.benchmarks.len(), 1);
        assert_eq!(doc.benchmarks[0].name, "Copy/8");

        let bad = RunConfig {
            filter: "Copy[".to_owned(),
            ..RunConfig::default()
        };
        assert!(matches!(
            list_benchmarks(&registry, &bad).unwrap_err(),
            results_model::Error::BadRegex { .. }
        ));
    }

    #[test]
    fn per_definition_overrides_beat_the_global_config() {
        let registry = single_instance_registry(
            BenchmarkDefinition::new("Tuned", spin)
                .min_time(0.001)
                .repetitions(2),
        );
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 10.0,
            repetitions: 1,
            ..RunConfig::default()
        };
        let ms = run_one(registry.instance("Tuned").unwrap(), &config, &clock);
        assert_eq!(ms.len(), 2);
        // 0.001 s at 1 ms/iteration is satisfied by the very first batch.
        assert!(ms.iter().all(|m| m.iterations == 1));
    }

    #[test]
    fn identical_fake_runs_serialize_identically() {
        let build = || {
            let registry = single_instance_registry(BenchmarkDefinition::new("Spin", spin));
            let clock = FakeClock::new(1_000_000);
            let config = RunConfig {
                min_time: 0.05,
                repetitions: 3,
                ..RunConfig::default()
            };
            let doc = run_filtered(&registry, &config, &clock, RunContext::default()).unwrap();
            results_model::serialize_document(&doc)
        };
        assert_eq!(build(), build());
    }
}
