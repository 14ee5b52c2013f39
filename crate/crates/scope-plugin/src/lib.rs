//! The extensibility layer of the benchmark harness: *scopes* are
//! self-describing, in-process plugins that contribute benchmarks,
//! command-line options, and initialization hooks.
//!
//! A scope is registered with the [`Harness`] as a [`ScopeDescriptor`]: a
//! name, a version, an enabled bit, and a registration callback. Enabled
//! scopes run their callback immediately and their contributions become
//! part of the harness; disabled scopes (whether disabled in code or via
//! `--disable-scope=<name>` on the command line) contribute nothing
//! observable at all.
//!
//! ```
//! use scope_plugin::{Harness, HookOutcome, HookPhase, ScopeDescriptor};
//! use bench_core::BenchmarkDefinition;
//!
//! let mut harness = Harness::new("0.1.0");
//! harness
//!     .register_scope(ScopeDescriptor::new("demo", "1.0", |ctx| {
//!         ctx.register_benchmark(BenchmarkDefinition::new("Demo_Spin", |state| {
//!             while state.keep_running() {}
//!         }))?;
//!         Ok(())
//!     }))
//!     .unwrap();
//! harness.freeze();
//!
//! assert_eq!(harness.run_init(HookPhase::BeforeParse, &[]), HookOutcome::Continue);
//! let invocation = harness.parse_args(&[]).unwrap();
//! assert_eq!(invocation.run.filter, ".*");
//! ```

mod example;
mod harness;
mod hooks;
mod options;
mod parse;

pub use example::{build_example_scope, EXAMPLE_SCOPE_NAME, EXAMPLE_SCOPE_VERSION};
pub use harness::{Harness, ScopeContext, ScopeDescriptor, ScopeError};
pub use hooks::{HookOutcome, HookPhase, InitHook};
pub use options::{OptionSpec, ValueArity};
pub use parse::{scan_disable_requests, Invocation, ParseError};
