//! Harness-level behavior: scope isolation, flag-space soundness, hook
//! ordering, and argument parsing.

use std::cell::RefCell;
use std::rc::Rc;

use bench_core::{run_filtered, BenchmarkDefinition, FakeClock, RunConfig};
use results_model::serialize_document;
use scope_plugin::{
    scan_disable_requests, Harness, HookOutcome, HookPhase, InitHook, OptionSpec, ParseError,
    ScopeDescriptor, ScopeError, ValueArity,
};

fn spin(state: &mut bench_core::BenchState) {
    while state.keep_running() {}
}

fn scope_with_benchmark(
    name: &'static str,
    version: &'static str,
    bench: &'static str,
) -> ScopeDescriptor {
    ScopeDescriptor::new(name, version, move |ctx| {
        ctx.register_benchmark(BenchmarkDefinition::new(bench, spin))?;
        Ok(())
    })
}

fn args(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| (*s).to_owned()).collect()
}

#[test]
fn two_scopes_contribute_disjoint_benchmarks() {
    let mut harness = Harness::new("0.1.0");
    harness
        .register_scope(scope_with_benchmark("alpha", "1.0", "Alpha_Spin"))
        .unwrap();
    harness
        .register_scope(scope_with_benchmark("beta", "2.0", "Beta_Spin"))
        .unwrap();
    harness.freeze();

    let names: Vec<&str> = harness.registry().instances().map(|i| i.name()).collect();
    assert_eq!(names, ["Alpha_Spin", "Beta_Spin"]);
    let entries = harness.scope_entries();
    assert_eq!(entries.len(), 2);
    assert_eq!(
        (entries[0].name.as_str(), entries[0].version.as_str()),
        ("alpha", "1.0")
    );
    assert_eq!(
        (entries[1].name.as_str(), entries[1].version.as_str()),
        ("beta", "2.0")
    );
    assert_eq!(
        harness.version_lines("bench"),
        "bench 0.1.0\nalpha 1.0\nbeta 2.0\n"
    );
}

#[test]
fn duplicate_scope_names_are_rejected() {
    let mut harness = Harness::new("0.1.0");
    harness
        .register_scope(scope_with_benchmark("alpha", "1.0", "Alpha_Spin"))
        .unwrap();
    let err = harness
        .register_scope(scope_with_benchmark("alpha", "9.9", "Other_Spin"))
        .unwrap_err();
    assert_eq!(err, ScopeError::DuplicateScope("alpha".to_owned()));
}

#[test]
fn registration_after_freeze_is_rejected() {
    let mut harness = Harness::new("0.1.0");
    harness.freeze();
    let err = harness
        .register_scope(scope_with_benchmark("late", "1.0", "Late_Spin"))
        .unwrap_err();
    assert_eq!(err, ScopeError::LateRegistration);
}

/// Disabling a scope removes its benchmarks, flags, hooks, and context
/// entry — and changes nothing else in the serialized output.
#[test]
fn disabled_scope_is_invisible_everywhere() {
    let build = |disable: bool| {
        let mut harness = Harness::new("0.1.0");
        if disable {
            harness.set_disabled_scopes(["beta".to_owned()]);
        }
        harness
            .register_scope(scope_with_benchmark("alpha", "1.0", "Alpha_Spin"))
            .unwrap();
        harness
            .register_scope(ScopeDescriptor::new("beta", "2.0", |ctx| {
                ctx.register_benchmark(BenchmarkDefinition::new("Beta_Spin", spin))?;
                ctx.register_option(OptionSpec::new(
                    "--beta-level",
                    ValueArity::OneValue,
                    "beta's knob",
                    |_| Ok(()),
                ))?;
                ctx.register_init(InitHook::new(HookPhase::AfterParse, |_| {
                    HookOutcome::Exit {
                        code: 7,
                        message: "beta always exits".to_owned(),
                    }
                }));
                Ok(())
            }))
            .unwrap();
        harness.validate_disable_requests().unwrap();
        harness.freeze();
        harness
    };

    let mut on = build(false);
    let mut off = build(true);

    // The flag exists only while beta is enabled.
    assert!(on.parse_args(&args(&["--beta-level=3"])).is_ok());
    assert_eq!(
        off.parse_args(&args(&["--beta-level=3"])).unwrap_err(),
        ParseError::UnknownFlag("--beta-level=3".to_owned())
    );

    // The hook exists only while beta is enabled.
    assert!(matches!(
        on.run_init(HookPhase::AfterParse, &[]),
        HookOutcome::Exit { code: 7, .. }
    ));
    assert_eq!(
        off.run_init(HookPhase::AfterParse, &[]),
        HookOutcome::Continue
    );

    // The context roster and benchmark set shrink by exactly beta's part.
    assert_eq!(off.scope_entries().len(), 1);
    assert_eq!(off.version_lines("bench"), "bench 0.1.0\nalpha 1.0\n");
    let run = |harness: &Harness| {
        let clock = FakeClock::new(1_000_000);
        let config = RunConfig {
            min_time: 0.01,
            ..RunConfig::default()
        };
        run_filtered(harness.registry(), &config, &clock, Default::default()).unwrap()
    };
    let doc_on = run(&on);
    let doc_off = run(&off);
    assert_eq!(
        doc_on
            .benchmarks
            .iter()
            .map(|b| b.name.as_str())
            .collect::<Vec<_>>(),
        ["Alpha_Spin", "Beta_Spin"]
    );
    assert_eq!(
        doc_off
            .benchmarks
            .iter()
            .map(|b| b.name.as_str())
            .collect::<Vec<_>>(),
        ["Alpha_Spin"]
    );
    // Beyond the missing record, the remaining output is byte-identical.
    let mut trimmed = doc_on.clone();
    trimmed.benchmarks.retain(|b| b.name != "Beta_Spin");
    assert_eq!(serialize_document(&trimmed), serialize_document(&doc_off));
}

#[test]
fn disabling_an_unknown_scope_is_reported() {
    let mut harness = Harness::new("0.1.0");
    harness.set_disabled_scopes(["nonexistent".to_owned()]);
    harness
        .register_scope(scope_with_benchmark("alpha", "1.0", "Alpha_Spin"))
        .unwrap();
    assert_eq!(
        harness.validate_disable_requests().unwrap_err(),
        ScopeError::UnknownScope("nonexistent".to_owned())
    );
}

#[test]
fn scan_finds_disable_requests_in_both_forms() {
    assert_eq!(
        scan_disable_requests(&args(&[
            "--benchmark_filter=X",
            "--disable-scope=alpha",
            "--disable-scope",
            "beta",
            "--version",
        ])),
        ["alpha", "beta"]
    );
    assert!(scan_disable_requests(&args(&["--disable-scope"])).is_empty());
}

#[test]
fn flag_collisions_are_rejected_at_registration() {
    // Against a core flag.
    let mut harness = Harness::new("0.1.0");
    let err = harness
        .register_scope(ScopeDescriptor::new("alpha", "1.0", |ctx| {
            ctx.register_option(OptionSpec::new(
                "--benchmark_filter",
                ValueArity::OneValue,
                "shadows a core flag",
                |_| Ok(()),
            ))?;
            Ok(())
        }))
        .unwrap_err();
    assert!(
        matches!(&err, ScopeError::BadFlag { flag, .. } if flag == "--benchmark_filter"),
        "{err}"
    );

    // Across scopes.
    let mut harness = Harness::new("0.1.0");
    let shared_option = |ctx: &mut scope_plugin::ScopeContext| {
        ctx.register_option(OptionSpec::new(
            "--shared",
            ValueArity::Flag,
            "contested flag",
            |_| Ok(()),
        ))
    };
    harness
        .register_scope(ScopeDescriptor::new("alpha", "1.0", move |ctx| {
            shared_option(ctx)?;
            Ok(())
        }))
        .unwrap();
    let err = harness
        .register_scope(ScopeDescriptor::new("beta", "1.0", move |ctx| {
            shared_option(ctx)?;
            Ok(())
        }))
        .unwrap_err();
    assert!(
        matches!(&err, ScopeError::BadFlag { flag, reason } if flag == "--shared" && reason.contains("alpha")),
        "{err}"
    );

    // Short flags are not part of the option grammar.
    let mut harness = Harness::new("0.1.0");
    let err = harness
        .register_scope(ScopeDescriptor::new("gamma", "1.0", |ctx| {
            ctx.register_option(OptionSpec::new("-s", ValueArity::Flag, "short", |_| Ok(())))?;
            Ok(())
        }))
        .unwrap_err();
    assert!(matches!(err, ScopeError::BadFlag { .. }));
}

#[test]
fn hooks_run_in_priority_then_registration_order_and_exit_short_circuits() {
    let order: Rc<RefCell<Vec<&'static str>>> = Rc::new(RefCell::new(Vec::new()));
    let mut harness = Harness::new("0.1.0");
    let trace = |label: &'static str, order: &Rc<RefCell<Vec<&'static str>>>| {
        let order = Rc::clone(order);
        move |_argv: &[String]| {
            order.borrow_mut().push(label);
            HookOutcome::Continue
        }
    };
    let o = Rc::clone(&order);
    harness
        .register_scope(ScopeDescriptor::new("hooks", "1.0", move |ctx| {
            // Registered out of priority order on purpose.
            ctx.register_init(InitHook::new(HookPhase::AfterParse, trace("p1", &o)).priority(1));
            ctx.register_init(InitHook::new(HookPhase::AfterParse, trace("p0-first", &o)));
            ctx.register_init(InitHook::new(HookPhase::BeforeParse, trace("before", &o)));
            ctx.register_init(InitHook::new(HookPhase::AfterParse, trace("p0-second", &o)));
            Ok(())
        }))
        .unwrap();
    harness.freeze();

    assert_eq!(
        harness.run_init(HookPhase::BeforeParse, &[]),
        HookOutcome::Continue
    );
    assert_eq!(
        harness.run_init(HookPhase::AfterParse, &[]),
        HookOutcome::Continue
    );
    assert_eq!(
        *order.borrow(),
        ["before", "p0-first", "p0-second", "p1"],
        "phase filters, then priority, then registration order"
    );

    // An exit stops the chain: the p1 hook must not run again afterwards.
    let mut harness = Harness::new("0.1.0");
    let ran_after: Rc<RefCell<bool>> = Rc::new(RefCell::new(false));
    let ran = Rc::clone(&ran_after);
    harness
        .register_scope(ScopeDescriptor::new("hooks", "1.0", move |ctx| {
            ctx.register_init(InitHook::new(
                HookPhase::AfterParse,
                |_argv: &[String]| HookOutcome::Exit {
                    code: 2,
                    message: "unsupported option".to_owned(),
                },
            ));
            ctx.register_init(
                InitHook::new(HookPhase::AfterParse, move |_argv: &[String]| {
                    *ran.borrow_mut() = true;
                    HookOutcome::Continue
                })
                .priority(5),
            );
            Ok(())
        }))
        .unwrap();
    harness.freeze();
    assert_eq!(
        harness.run_init(HookPhase::AfterParse, &[]),
        HookOutcome::Exit {
            code: 2,
            message: "unsupported option".to_owned()
        }
    );
    assert!(!*ran_after.borrow(), "hooks after an exit must not run");
}

#[test]
fn hooks_with_no_registrations_continue() {
    let mut harness = Harness::new("0.1.0");
    harness.freeze();
    assert_eq!(
        harness.run_init(HookPhase::BeforeParse, &[]),
        HookOutcome::Continue
    );
    assert_eq!(
        harness.run_init(HookPhase::AfterParse, &[]),
        HookOutcome::Continue
    );
}

#[test]
fn core_flags_fill_the_invocation() {
    let mut harness = Harness::new("0.1.0");
    harness.freeze();
    let invocation = harness
        .parse_args(&args(&[
            "--benchmark_filter=Copy.*",
            "--benchmark_min_time",
            "0.25",
            "--benchmark_repetitions=5",
            "--benchmark_report_aggregates_only",
            "--benchmark_list_tests=false",
            "--benchmark_out=r.json",
            "--benchmark_fake_clock=1000",
        ]))
        .unwrap();
    assert_eq!(invocation.run.filter, "Copy.*");
    assert_eq!(invocation.run.min_time, 0.25);
    assert_eq!(invocation.run.repetitions, 5);
    assert!(invocation.run.report_aggregates_only);
    assert!(!invocation.list_tests);
    assert_eq!(invocation.out_path.as_deref(), Some("r.json"));
    assert_eq!(invocation.fake_clock_ns, Some(1000));
    assert!(!invocation.show_version && !invocation.show_help);
}

#[test]
fn scope_option_bindings_receive_values_in_both_forms() {
    let seen: Rc<RefCell<Vec<String>>> = Rc::new(RefCell::new(Vec::new()));
    let mut harness = Harness::new("0.1.0");
    let sink = Rc::clone(&seen);
    harness
        .register_scope(ScopeDescriptor::new("alpha", "1.0", move |ctx| {
            let sink = Rc::clone(&sink);
            ctx.register_option(OptionSpec::new(
                "--example-seed",
                ValueArity::OneValue,
                "random seed",
                move |value| {
                    sink.borrow_mut().push(value.to_owned());
                    Ok(())
                },
            ))?;
            Ok(())
        }))
        .unwrap();
    harness.freeze();
    harness
        .parse_args(&args(&["--example-seed", "42", "--example-seed=43"]))
        .unwrap();
    assert_eq!(*seen.borrow(), ["42", "43"]);
}

#[test]
fn parse_errors_name_the_problem() {
    let mut harness = Harness::new("0.1.0");
    let flag_state: Rc<RefCell<bool>> = Rc::new(RefCell::new(false));
    let flag_sink = Rc::clone(&flag_state);
    harness
        .register_scope(ScopeDescriptor::new("alpha", "1.0", move |ctx| {
            ctx.register_option(OptionSpec::new(
                "--picky",
                ValueArity::OneValue,
                "accepts only 'yes'",
                |value| {
                    if value == "yes" {
                        Ok(())
                    } else {
                        Err("only 'yes' is accepted".to_owned())
                    }
                },
            ))?;
            let flag_sink = Rc::clone(&flag_sink);
            ctx.register_option(OptionSpec::new(
                "--switch",
                ValueArity::Flag,
                "bare boolean",
                move |value| {
                    *flag_sink.borrow_mut() = value == "true";
                    Ok(())
                },
            ))?;
            Ok(())
        }))
        .unwrap();
    harness.freeze();

    assert_eq!(
        harness.parse_args(&args(&["--no-such-flag"])).unwrap_err(),
        ParseError::UnknownFlag("--no-such-flag".to_owned())
    );
    assert_eq!(
        harness.parse_args(&args(&["--picky"])).unwrap_err(),
        ParseError::MissingValue("--picky".to_owned())
    );
    let err = harness.parse_args(&args(&["--picky=no"])).unwrap_err();
    assert_eq!(
        err.to_string(),
        "invalid value \"no\" for --picky: only 'yes' is accepted"
    );
    assert!(matches!(
        harness
            .parse_args(&args(&["--benchmark_repetitions=zero"]))
            .unwrap_err(),
        ParseError::BadValue { .. }
    ));
    assert!(matches!(
        harness
            .parse_args(&args(&["--benchmark_min_time=-1"]))
            .unwrap_err(),
        ParseError::BadValue { .. }
    ));

    // A bare Flag-arity option binds "true".
    harness.parse_args(&args(&["--switch"])).unwrap();
    assert!(*flag_state.borrow());
}

#[test]
fn help_tables_cover_core_flags_and_scope_options() {
    let mut harness = Harness::new("0.1.0");
    harness
        .register_scope(ScopeDescriptor::new("alpha", "1.0", |ctx| {
            ctx.register_option(OptionSpec::new(
                "--alpha-mode",
                ValueArity::OneValue,
                "alpha's operating mode",
                |_| Ok(()),
            ))?;
            Ok(())
        }))
        .unwrap();
    harness.freeze();
    let core = Harness::core_flag_help();
    assert!(core
        .iter()
        .any(|(flag, _)| flag == "--benchmark_filter=<value>"));
    // The deterministic-clock test seam stays out of the help output.
    assert!(core.iter().all(|(flag, _)| !flag.contains("fake_clock")));
    let scoped = harness.option_help();
    assert_eq!(scoped.len(), 1);
    assert_eq!(scoped[0].0, "--alpha-mode=<value>");
    assert_eq!(scoped[0].1, "alpha's operating mode");
}
