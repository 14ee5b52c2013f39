//! Command-line parsing over the core flags plus every enabled scope's
//! options.

use bench_core::RunConfig;
use thiserror::Error;

use crate::harness::Harness;
use crate::options::ValueArity;

/// Core flags, their arity, and their help text. Scope options may not
/// reuse these names.
pub(crate) const CORE_FLAGS: &[(&str, ValueArity, &str)] = &[
    (
        "--benchmark_filter",
        ValueArity::OneValue,
        "Run only benchmarks whose name matches this regular expression",
    ),
    (
        "--benchmark_min_time",
        ValueArity::OneValue,
        "Minimum measured running time per repetition, in seconds (default 0.5)",
    ),
    (
        "--benchmark_repetitions",
        ValueArity::OneValue,
        "Number of repetitions per benchmark (default 1)",
    ),
    (
        "--benchmark_report_aggregates_only",
        ValueArity::Flag,
        "With repetitions, report only the mean/median/stddev rows",
    ),
    (
        "--benchmark_list_tests",
        ValueArity::Flag,
        "List benchmark names, one per line, instead of running",
    ),
    (
        "--benchmark_out",
        ValueArity::OneValue,
        "Write the JSON results document to this file instead of standard output",
    ),
    (
        "--disable-scope",
        ValueArity::OneValue,
        "Disable the named scope and everything it contributes (repeatable)",
    ),
    (
        "--version",
        ValueArity::Flag,
        "Print harness and scope versions",
    ),
    ("--help", ValueArity::Flag, "Print usage information"),
];

/// Test seam, deliberately absent from help: replaces the system clock
/// with a deterministic fake advancing this many nanoseconds per
/// iteration.
pub(crate) const FAKE_CLOCK_FLAG: &str = "--benchmark_fake_clock";

pub(crate) fn is_core_flag(flag: &str) -> bool {
    flag == FAKE_CLOCK_FLAG || CORE_FLAGS.iter().any(|(name, _, _)| *name == flag)
}

/// Errors from argument parsing.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    /// An argument matched neither a core flag nor any scope option.
    #[error("unrecognized argument {0:?}")]
    UnknownFlag(String),
    /// A value-taking flag appeared with nothing after it.
    #[error("flag {0} requires a value")]
    MissingValue(String),
    /// A binding or a core flag rejected its value.
    #[error("invalid value {value:?} for {flag}: {message}")]
    BadValue {
        flag: String,
        value: String,
        message: String,
    },
}

/// Everything one invocation asked for: the run configuration plus the
/// harness-level requests that are not part of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub run: RunConfig,
    /// Destination for the results document (`--benchmark_out`).
    pub out_path: Option<String>,
    /// List benchmark names instead of running.
    pub list_tests: bool,
    /// Print version lines and stop.
    pub show_version: bool,
    /// Print usage and stop.
    pub show_help: bool,
    /// Nanoseconds per iteration for the deterministic test clock.
    pub fake_clock_ns: Option<u64>,
}

impl Default for Invocation {
    fn default() -> Self {
        Invocation {
            run: RunConfig::default(),
            out_path: None,
            list_tests: false,
            show_version: false,
            show_help: false,
            fake_clock_ns: None,
        }
    }
}

/// Pre-parse scan for `--disable-scope` values, run before scopes
/// register (whether a scope is disabled decides whether its flags and
/// hooks exist for [`Harness::parse_args`] at all). Malformed uses are
/// left for `parse_args` to report.
pub fn scan_disable_requests(argv: &[String]) -> Vec<String> {
    let mut names = Vec::new();
    let mut args = argv.iter().peekable();
    while let Some(arg) = args.next() {
        if let Some(value) = arg.strip_prefix("--disable-scope=") {
            names.push(value.to_owned());
        } else if arg == "--disable-scope" {
            if let Some(value) = args.peek() {
                names.push((*value).clone());
                args.next();
            }
        }
    }
    names
}

fn parse_bool(flag: &str, value: &str) -> Result<bool, ParseError> {
    match value {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(ParseError::BadValue {
            flag: flag.to_owned(),
            value: value.to_owned(),
            message: "expected true or false".to_owned(),
        }),
    }
}

fn bad_value(flag: &str, value: &str, message: impl Into<String>) -> ParseError {
    ParseError::BadValue {
        flag: flag.to_owned(),
        value: value.to_owned(),
        message: message.into(),
    }
}

impl Harness {
    /// Parses `argv` (program name already stripped): core flags fill the
    /// [`Invocation`], scope option bindings fire in argument order.
    ///
    /// Both `--flag=value` and `--flag value` forms are accepted. A
    /// [`ValueArity::Flag`] option given bare binds the text `"true"`.
    pub fn parse_args(&mut self, argv: &[String]) -> Result<Invocation, ParseError> {
        let mut invocation = Invocation::default();
        let mut i = 0;
        while i < argv.len() {
            let arg = &argv[i];
            i += 1;
            let (head, inline_value) = match arg.split_once('=') {
                Some((head, value)) => (head, Some(value)),
                None => (arg.as_str(), None),
            };

            // A closure would borrow `i`/`argv` mutably alongside the
            // option table below, so value consumption is a small macro.
            macro_rules! take_value {
                () => {
                    match inline_value {
                        Some(v) => v.to_owned(),
                        None => {
                            if i < argv.len() {
                                i += 1;
                                argv[i - 1].clone()
                            } else {
                                return Err(ParseError::MissingValue(head.to_owned()));
                            }
                        }
                    }
                };
            }

            match head {
                "--benchmark_filter" => invocation.run.filter = take_value!(),
                "--benchmark_min_time" => {
                    let text = take_value!();
                    let seconds: f64 = text
                        .parse()
                        .map_err(|_| bad_value(head, &text, "expected a number of seconds"))?;
                    if !(seconds > 0.0 && seconds.is_finite()) {
                        return Err(bad_value(
                            head,
                            &text,
                            "must be a positive number of seconds",
                        ));
                    }
                    invocation.run.min_time = seconds;
                }
                "--benchmark_repetitions" => {
                    let text = take_value!();
                    let reps: u32 = text
                        .parse()
                        .map_err(|_| bad_value(head, &text, "expected a whole number"))?;
                    if reps == 0 {
                        return Err(bad_value(head, &text, "must be at least 1"));
                    }
                    invocation.run.repetitions = reps;
                }
                "--benchmark_report_aggregates_only" => {
                    let value = inline_value.unwrap_or("true");
                    invocation.run.report_aggregates_only = parse_bool(head, value)?;
                }
                "--benchmark_list_tests" => {
                    let value = inline_value.unwrap_or("true");
                    invocation.list_tests = parse_bool(head, value)?;
                }
                "--benchmark_out" => invocation.out_path = Some(take_value!()),
                "--disable-scope" => {
                    // Applied during the pre-parse scan; consumed here so
                    // the value is not mistaken for another argument.
                    let _ = take_value!();
                }
                "--version" => invocation.show_version = true,
                "--help" => invocation.show_help = true,
                _ if head == FAKE_CLOCK_FLAG => {
                    let text = take_value!();
                    let ns: u64 = text.parse().map_err(|_| {
                        bad_value(head, &text, "expected nanoseconds per iteration")
                    })?;
                    invocation.fake_clock_ns = Some(ns);
                }
                _ => {
                    let Some(option) = self.options.iter_mut().find(|o| o.spec.flag == head) else {
                        return Err(ParseError::UnknownFlag(arg.clone()));
                    };
                    let value = match option.spec.arity {
                        ValueArity::Flag => inline_value.unwrap_or("true").to_owned(),
                        ValueArity::OneValue => match inline_value {
                            Some(v) => v.to_owned(),
                            None => {
                                if i < argv.len() {
                                    i += 1;
                                    argv[i - 1].clone()
                                } else {
                                    return Err(ParseError::MissingValue(head.to_owned()));
                                }
                            }
                        },
                    };
                    (option.spec.binding)(&value)
                        .map_err(|message| bad_value(head, &value, message))?;
                }
            }
        }
        Ok(invocation)
    }

    /// Help lines for the core flags: `(flag-with-placeholder,
    /// description)` pairs in a stable order.
    pub fn core_flag_help() -> Vec<(String, String)> {
        CORE_FLAGS
            .iter()
            .map(|(flag, arity, description)| {
                let left = match arity {
                    ValueArity::Flag => (*flag).to_owned(),
                    ValueArity::OneValue => format!("{flag}=<value>"),
                };
                (left, (*description).to_owned())
            })
            .collect()
    }
}
