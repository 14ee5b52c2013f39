//! The bundled example scope: two tiny benchmarks, two options, and an
//! init hook, demonstrating the full plugin surface. Prose documentation
//! for the benchmarks lives in `docs/example-scope.md`.

use std::cell::RefCell;
use std::rc::Rc;

use bench_core::{BenchState, BenchmarkDefinition, CounterKind};

use crate::harness::ScopeDescriptor;
use crate::hooks::{HookOutcome, HookPhase, InitHook};
use crate::options::{OptionSpec, ValueArity};

/// Name under which the example scope registers.
pub const EXAMPLE_SCOPE_NAME: &str = "example";

/// Version the example scope reports.
pub const EXAMPLE_SCOPE_VERSION: &str = "1.0.0";

/// Copied-buffer sizes in bytes: 2^10 through 2^20 by powers of four.
const COPY_SIZES: [i64; 6] = [1 << 10, 1 << 12, 1 << 14, 1 << 16, 1 << 18, 1 << 20];

fn copy_body(state: &mut BenchState) {
    let size = state.arg(0) as usize;
    let src = vec![1u8; size];
    let mut dst = vec![0u8; size];
    while state.keep_running() {
        dst.copy_from_slice(&src);
        std::hint::black_box(dst.as_slice());
    }
    let copied = size as u64 * state.iterations();
    state.set_counter("bytes", copied as f64, CounterKind::Rate);
}

fn noop_body(state: &mut BenchState) {
    while state.keep_running() {}
}

/// Builds the example scope descriptor.
///
/// It contributes:
/// - `Example_Copy/<bytes>`: copies a `<bytes>`-sized buffer once per
///   iteration and reports the copy throughput as a rate counter
///   `"bytes"`;
/// - `Example_Noop`: an empty loop measuring pure harness overhead;
/// - `--example-fail=<reason>` and `--example-exit=<when>`: demonstration
///   options whose only effect is an after-parse hook that stops the
///   process with status 1 when either was supplied — the shape a real
///   scope uses to bail out of configurations it cannot run under.
pub fn build_example_scope() -> ScopeDescriptor {
    ScopeDescriptor::new(EXAMPLE_SCOPE_NAME, EXAMPLE_SCOPE_VERSION, |ctx| {
        let mut copy = BenchmarkDefinition::new("Example_Copy", copy_body);
        for size in COPY_SIZES {
            copy = copy.arg(size);
        }
        ctx.register_benchmark(copy)?;
        ctx.register_benchmark(BenchmarkDefinition::new("Example_Noop", noop_body))?;

        let fail_value: Rc<RefCell<Option<String>>> = Rc::new(RefCell::new(None));
        let exit_value: Rc<RefCell<Option<String>>> = Rc::new(RefCell::new(None));

        let fail_binding = Rc::clone(&fail_value);
        ctx.register_option(OptionSpec::new(
            "--example-fail",
            ValueArity::OneValue,
            "Demonstration option: make the example scope stop startup with status 1",
            move |value| {
                *fail_binding.borrow_mut() = Some(value.to_owned());
                Ok(())
            },
        ))?;
        let exit_binding = Rc::clone(&exit_value);
        ctx.register_option(OptionSpec::new(
            "--example-exit",
            ValueArity::OneValue,
            "Demonstration option: make the example scope exit before any benchmark runs",
            move |value| {
                *exit_binding.borrow_mut() = Some(value.to_owned());
                Ok(())
            },
        ))?;

        ctx.register_init(InitHook::new(HookPhase::AfterParse, move |_argv| {
            let supplied = fail_value
                .borrow()
                .as_ref()
                .map(|v| format!("--example-fail={v}"))
                .or_else(|| {
                    exit_value
                        .borrow()
                        .as_ref()
                        .map(|v| format!("--example-exit={v}"))
                });
            match supplied {
                Some(flag) => HookOutcome::Exit {
                    code: 1,
                    message: format!(
                        "example scope: exiting during initialization because {flag} was given"
                    ),
                },
                None => HookOutcome::Continue,
            }
        }));
        Ok(())
    })
}
