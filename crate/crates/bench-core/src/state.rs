//! The per-batch state handed to a benchmark body.

use indexmap::IndexMap;

use crate::clock::Clock;

/// How a user counter is normalized before reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterKind {
    /// Reported as-is.
    Plain,
    /// Divided by the batch's total elapsed seconds (manual time when the
    /// benchmark uses it, wall time otherwise), yielding a per-second rate.
    Rate,
    /// Divided by the number of iterations, yielding a per-iteration
    /// average.
    AvgIterations,
}

/// State for one timed batch of iterations.
///
/// A benchmark body loops on [`keep_running`](BenchState::keep_running) and
/// may report manual timing, counters, and errors through the other
/// methods:
///
/// ```
/// # use bench_core::{BenchState, CounterKind};
/// fn body(state: &mut BenchState) {
///     let size = state.arg(0) as usize;
///     let src = vec![0u8; size];
///     let mut dst = vec![0u8; size];
///     while state.keep_running() {
///         dst.copy_from_slice(&src);
///         std::hint::black_box(&dst);
///     }
///     state.set_counter(
///         "bytes",
///         (size as u64 * state.iterations()) as f64,
///         CounterKind::Rate,
///     );
/// }
/// ```
pub struct BenchState<'a> {
    requested_iterations: u64,
    remaining: u64,
    args: &'a [i64],
    manual_allowed: bool,
    manual_time_accumulated: f64,
    counters: IndexMap<String, (f64, CounterKind)>,
    error: Option<String>,
    clock: &'a dyn Clock,
}

impl<'a> BenchState<'a> {
    pub(crate) fn new(
        iterations: u64,
        args: &'a [i64],
        manual_allowed: bool,
        clock: &'a dyn Clock,
    ) -> Self {
        BenchState {
            requested_iterations: iterations,
            remaining: iterations,
            args,
            manual_allowed,
            manual_time_accumulated: 0.0,
            counters: IndexMap::new(),
            error: None,
            clock,
        }
    }

    /// Returns `true` while more iterations should run. The body must call
    /// this exactly once per iteration, as its loop condition.
    ///
    /// Once an error has been reported the loop ends early.
    pub fn keep_running(&mut self) -> bool {
        if self.error.is_some() || self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        self.clock.iteration_tick();
        true
    }

    /// The number of iterations requested for this batch.
    pub fn iterations(&self) -> u64 {
        self.requested_iterations
    }

    /// The instance's argument tuple (empty for argument-less benchmarks).
    pub fn args(&self) -> &[i64] {
        self.args
    }

    /// The argument at `index`.
    ///
    /// # Panics
    ///
    /// Panics if the instance has no argument at that position; asking for
    /// arguments that were never registered is a bug in the benchmark.
    pub fn arg(&self, index: usize) -> i64 {
        match self.args.get(index) {
            Some(v) => *v,
            None => panic!(
                "benchmark asked for arg({index}) but only {} argument(s) were registered",
                self.args.len()
            ),
        }
    }

    /// Adds `seconds` to this batch's manually measured time.
    ///
    /// Only valid for benchmarks registered with
    /// [`manual_time`](crate::BenchmarkDefinition::manual_time); calling it
    /// elsewhere records an error on the batch.
    pub fn set_iteration_time(&mut self, seconds: f64) {
        if !self.manual_allowed {
            self.set_error(
                "set_iteration_time called on a benchmark not registered as manual_time",
            );
            return;
        }
        self.manual_time_accumulated += seconds;
    }

    /// Sets the user counter `name` to `value`. Setting the same name again
    /// overwrites the value; first-set order is preserved in the report.
    pub fn set_counter(&mut self, name: impl Into<String>, value: f64, kind: CounterKind) {
        self.counters.insert(name.into(), (value, kind));
    }

    /// Reports that this benchmark failed. The iteration loop stops and the
    /// repetition is reported as errored instead of timed.
    pub fn set_error(&mut self, message: impl Into<String>) {
        if self.error.is_none() {
            self.error = Some(message.into());
        }
    }

    pub(crate) fn manual_time_accumulated(&self) -> f64 {
        self.manual_time_accumulated
    }

    pub(crate) fn counters(&self) -> &IndexMap<String, (f64, CounterKind)> {
        &self.counters
    }

    pub(crate) fn error(&self) -> Option<&str> {
        self.error.as_deref()
    }
}
