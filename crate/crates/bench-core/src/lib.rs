//! The benchmark harness core: a registry of benchmark definitions, an
//! adaptive-iteration runner with wall/CPU/manual timing and user counters,
//! repetition statistics, and results-document emission.
//!
//! The runner is deliberately sequential: registration happens on one thread
//! during startup, then the registry is frozen and benchmarks execute one
//! after another on the calling thread. Timing sources are injected through
//! the [`Clock`] trait, so the whole pipeline — iteration decisions, batch
//! timing, counter normalization, document emission — is exactly
//! reproducible under a [`FakeClock`].
//!
//! ```
//! use bench_core::{BenchmarkDefinition, FakeClock, Registry, RunConfig};
//!
//! let mut registry = Registry::new();
//! registry
//!     .register_benchmark(BenchmarkDefinition::new("Noop", |state| {
//!         while state.keep_running() {}
//!     }))
//!     .unwrap();
//! registry.freeze();
//!
//! let clock = FakeClock::new(1_000_000); // 1 ms per iteration
//! let doc = bench_core::run_filtered(
//!     &registry,
//!     &RunConfig::default(),
//!     &clock,
//!     Default::default(),
//! )
//! .unwrap();
//! assert_eq!(doc.benchmarks[0].name, "Noop");
//! ```

mod clock;
mod context;
mod registry;
mod runner;
mod state;
mod stats;

pub use clock::{Clock, FakeClock, SystemClock};
pub use context::gather_context;
pub use registry::{BenchmarkDefinition, BenchmarkHandle, InstanceRef, Registry, RegistryError};
pub use runner::{
    decide_iterations, list_benchmarks, run_filtered, run_one, IterationDecision, Measurement,
    RunConfig, MAX_ITERATIONS,
};
pub use state::{BenchState, CounterKind};
pub use stats::{compute_statistics, mean, median, sample_stddev, StatsError};
