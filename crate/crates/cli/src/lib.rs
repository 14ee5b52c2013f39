//! Command-line entry points: the benchmark binary (`mscope`) and the
//! results tool (`mscope-results`).
//!
//! Both binaries are thin wrappers over [`bench_main`] and
//! [`results_main`], which take the full argv (program name first) and
//! return the process exit status: 0 for success, 1 for a runtime
//! failure, 2 for a usage error. Usage errors print a synopsis to the
//! error stream; all diagnostics go to the error stream and all data to
//! the output stream.

use std::collections::HashMap;
use std::path::Path;

use bench_core::{gather_context, list_benchmarks, run_filtered, Clock, FakeClock, SystemClock};
use plot_engine::{
    atomic_write, build_series, load_spec, render, spec_dependencies, write_outputs,
};
use results_model::{concat_documents, filter_by_name, parse_document, serialize_document};
use scope_plugin::{build_example_scope, scan_disable_requests, Harness, HookOutcome, HookPhase};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn bench_usage() {
    eprintln!(
        "usage: mscope [--benchmark_filter=<regex>] [--benchmark_min_time=<secs>]\n\
         \x20             [--benchmark_repetitions=<n>] [--benchmark_report_aggregates_only]\n\
         \x20             [--benchmark_list_tests] [--benchmark_out=<path>]\n\
         \x20             [--disable-scope=<name>] [--version] [--help] [scope options]"
    );
}

fn bench_help(harness: &Harness) -> String {
    let mut out = String::new();
    out.push_str("mscope: run registered benchmarks and write a results document\n\n");
    out.push_str("core flags:\n");
    for (flag, help) in Harness::core_flag_help() {
        out.push_str(&format!("  {flag:<42} {help}\n"));
    }
    let options = harness.option_help();
    if !options.is_empty() {
        out.push_str("\nscope options:\n");
        for (flag, help) in options {
            out.push_str(&format!("  {flag:<42} {help}\n"));
        }
    }
    out
}

/// The benchmark binary: prescan scope disables, register scopes, run
/// init hooks around flag parsing, then list or run and emit the
/// document to `--benchmark_out` or standard output.
pub fn bench_main(argv: &[String]) -> i32 {
    let executable = argv.first().cloned().unwrap_or_else(|| "mscope".to_owned());
    let flags: Vec<String> = argv.iter().skip(1).cloned().collect();

    let mut harness = Harness::new(VERSION);
    harness.set_disabled_scopes(scan_disable_requests(&flags));
    if let Err(e) = harness.register_scope(build_example_scope()) {
        eprintln!("mscope: {e}");
        return 1;
    }
    if let Err(e) = harness.validate_disable_requests() {
        eprintln!("mscope: {e}");
        bench_usage();
        return 2;
    }
    harness.freeze();

    if let HookOutcome::Exit { code, message } = harness.run_init(HookPhase::BeforeParse, &flags) {
        eprintln!("{message}");
        return code;
    }

    let invocation = match harness.parse_args(&flags) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("mscope: {e}");
            bench_usage();
            return 2;
        }
    };

    if invocation.show_help {
        print!("{}", bench_help(&harness));
        return 0;
    }
    if invocation.show_version {
        print!("{}", harness.version_lines("mscope"));
        return 0;
    }

    if let HookOutcome::Exit { code, message } = harness.run_init(HookPhase::AfterParse, &flags) {
        eprintln!("{message}");
        return code;
    }

    if invocation.list_tests {
        return match list_benchmarks(harness.registry(), &invocation.run) {
            Ok(names) => {
                for name in names {
                    println!("{name}");
                }
                0
            }
            Err(e) => {
                eprintln!("mscope: {e}");
                bench_usage();
                2
            }
        };
    }

    let context = gather_context(
        chrono::Local::now()
            .format("%Y-%m-%dT%H:%M:%S%:z")
            .to_string(),
        executable,
        harness.version().to_owned(),
        harness.scope_entries(),
    );
    let clock: Box<dyn Clock> = match invocation.fake_clock_ns {
        Some(ns) => Box::new(FakeClock::new(ns)),
        None => Box::new(SystemClock::new()),
    };
    let document = match run_filtered(harness.registry(), &invocation.run, clock.as_ref(), context)
    {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("mscope: {e}");
            bench_usage();
            return 2;
        }
    };

    let text = serialize_document(&document);
    match &invocation.out_path {
        Some(path) => match atomic_write(Path::new(path), text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("mscope: {e}");
                1
            }
        },
        None => {
            print!("{text}");
            0
        }
    }
}

const SUBCOMMANDS: &str = "spec, deps, bar, cat, filter_name";

fn results_usage() {
    eprintln!(
        "usage: mscope-results <subcommand> [args]\n\
         \x20 spec <plotfile>            render a plot spec file to its declared outputs\n\
         \x20 deps <plotfile>            print the make rule for a spec's outputs\n\
         \x20 bar <in.json> <out.svg> --xfield <field> --yfield <field> [--title <text>]\n\
         \x20 cat <file ...>             concatenate documents to standard output ('-' reads standard input)\n\
         \x20 filter_name <file> <regex> keep only records whose name matches"
    );
}

/// Reads a file, or standard input when `path` is `-`.
fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| format!("<stdin>: {e}"))
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn fail(message: impl std::fmt::Display) -> i32 {
    eprintln!("mscope-results: {message}");
    1
}

fn usage_error(message: impl std::fmt::Display) -> i32 {
    eprintln!("mscope-results: {message}");
    results_usage();
    2
}

fn cmd_spec(args: &[&str]) -> i32 {
    let [file] = args else {
        return usage_error("spec takes exactly one plot file");
    };
    let text = match read_input(file) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let spec = match load_spec(&text) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let mut documents = HashMap::new();
    for ss in &spec.series {
        if documents.contains_key(&ss.input_file) {
            continue;
        }
        let doc = match read_input(&ss.input_file)
            .map_err(|e| e.to_string())
            .and_then(|t| parse_document(&t).map_err(|e| format!("{}: {e}", ss.input_file)))
        {
            Ok(d) => d,
            Err(e) => return fail(e),
        };
        documents.insert(ss.input_file.clone(), doc);
    }
    let series: Result<Vec<_>, _> = spec
        .series
        .iter()
        .map(|ss| build_series(ss, &documents[&ss.input_file]))
        .collect();
    let series = match series {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let svg = match render(&spec, &series) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match write_outputs(&spec, &svg) {
        Ok(()) => 0,
        Err(e) => fail(e),
    }
}

fn cmd_deps(args: &[&str]) -> i32 {
    let [file] = args else {
        return usage_error("deps takes exactly one plot file");
    };
    let text = match read_input(file) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match load_spec(&text) {
        Ok(spec) => {
            print!("{}", spec_dependencies(&spec));
            0
        }
        Err(e) => fail(e),
    }
}

fn cmd_bar(args: &[&str]) -> i32 {
    let mut positional: Vec<&str> = Vec::new();
    let mut xfield = None;
    let mut yfield = None;
    let mut title = None;
    let mut it = args.iter().peekable();
    while let Some(&arg) = it.next() {
        let Some(rest) = arg.strip_prefix("--") else {
            positional.push(arg);
            continue;
        };
        let (name, inline) = match rest.split_once('=') {
            Some((n, v)) => (n, Some(v)),
            None => (rest, None),
        };
        let slot = match name {
            "xfield" => &mut xfield,
            "yfield" => &mut yfield,
            "title" => &mut title,
            _ => return usage_error(format!("unknown flag --{name} for bar")),
        };
        let value = match inline {
            Some(v) => v,
            None => match it.next() {
                Some(&v) => v,
                None => return usage_error(format!("flag --{name} needs a value")),
            },
        };
        *slot = Some(value);
    }
    let ([input, output], Some(xfield), Some(yfield)) = (positional.as_slice(), xfield, yfield)
    else {
        return usage_error("bar needs <in.json> <out.svg> --xfield <field> --yfield <field>");
    };
    match plot_engine::quick_bar(input, xfield, yfield, title, output) {
        Ok(_) => 0,
        Err(e) => fail(e),
    }
}

fn cmd_cat(args: &[&str]) -> i32 {
    if args.is_empty() {
        return usage_error("cat needs at least one file");
    }
    let mut docs = Vec::new();
    for path in args {
        let text = match read_input(path) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        match parse_document(&text) {
            Ok(d) => docs.push(d),
            Err(e) => return fail(format!("{path}: {e}")),
        }
    }
    match concat_documents(&docs) {
        Ok(doc) => {
            print!("{}", serialize_document(&doc));
            0
        }
        Err(e) => fail(e),
    }
}

fn cmd_filter_name(args: &[&str]) -> i32 {
    let [file, pattern] = args else {
        return usage_error("filter_name takes <file> <regex>");
    };
    let text = match read_input(file) {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    let doc = match parse_document(&text) {
        Ok(d) => d,
        Err(e) => return fail(format!("{file}: {e}")),
    };
    match filter_by_name(&doc, pattern) {
        Ok(filtered) => {
            print!("{}", serialize_document(&filtered));
            0
        }
        Err(e) => fail(e),
    }
}

/// The results tool: dispatches the subcommand named by the first
/// positional argument.
pub fn results_main(argv: &[String]) -> i32 {
    let args: Vec<&str> = argv.iter().skip(1).map(String::as_str).collect();
    let Some((&sub, rest)) = args.split_first() else {
        return usage_error("a subcommand is required");
    };
    match sub {
        "spec" => cmd_spec(rest),
        "deps" => cmd_deps(rest),
        "bar" => cmd_bar(rest),
        "cat" => cmd_cat(rest),
        "filter_name" => cmd_filter_name(rest),
        other => usage_error(format!(
            "unknown subcommand '{other}' (valid: {SUBCOMMANDS})"
        )),
    }
}
