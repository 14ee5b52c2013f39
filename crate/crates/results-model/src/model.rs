use indexmap::IndexMap;

/// Whether a record is a raw benchmark run or a statistic over repetitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunType {
    /// A single measured run of a benchmark instance.
    Iteration,
    /// A synthesized aggregate row (`*_mean`, `*_median`, `*_stddev`).
    Aggregate,
}

impl RunType {
    /// The string used for this value in JSON (`"iteration"` / `"aggregate"`).
    pub fn as_str(self) -> &'static str {
        match self {
            RunType::Iteration => "iteration",
            RunType::Aggregate => "aggregate",
        }
    }

    /// Infers the run type from a benchmark name, for documents whose records
    /// carry no explicit `run_type` key. Exactly the aggregate suffixes
    /// `_mean`, `_median` and `_stddev` map to [`RunType::Aggregate`].
    pub fn infer_from_name(name: &str) -> RunType {
        if name.ends_with("_mean") || name.ends_with("_median") || name.ends_with("_stddev") {
            RunType::Aggregate
        } else {
            RunType::Iteration
        }
    }
}

/// Unit of the `real_time` and `cpu_time` fields of a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeUnit {
    /// Nanoseconds (the default unit).
    #[default]
    Ns,
    /// Microseconds.
    Us,
    /// Milliseconds.
    Ms,
    /// Seconds.
    S,
}

impl TimeUnit {
    /// The exact string serialized for this unit.
    pub fn as_str(self) -> &'static str {
        match self {
            TimeUnit::Ns => "ns",
            TimeUnit::Us => "us",
            TimeUnit::Ms => "ms",
            TimeUnit::S => "s",
        }
    }

    /// Parses one of `ns`/`us`/`ms`/`s`.
    pub fn from_str_opt(s: &str) -> Option<TimeUnit> {
        match s {
            "ns" => Some(TimeUnit::Ns),
            "us" => Some(TimeUnit::Us),
            "ms" => Some(TimeUnit::Ms),
            "s" => Some(TimeUnit::S),
            _ => None,
        }
    }
}

/// One measurement row of a results document.
///
/// `name` is the full benchmark name including slash-separated arguments and,
/// for aggregates, the statistic suffix (e.g. `Copy/1024_mean`).
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    /// Full benchmark name; never empty.
    pub name: String,
    /// Raw run or aggregate row.
    pub run_type: RunType,
    /// Iteration count of the run (for aggregates: the repetition count).
    pub iterations: u64,
    /// Wall-clock time per iteration, in `time_unit`.
    pub real_time: f64,
    /// CPU time per iteration, in `time_unit`.
    pub cpu_time: f64,
    /// Unit of `real_time` and `cpu_time`.
    pub time_unit: TimeUnit,
    /// User counters and derived rates, in document order. Serialized as
    /// additional numeric fields of the record object.
    pub counters: IndexMap<String, f64>,
    /// True when the benchmark body reported an error instead of a result.
    pub error_occurred: bool,
    /// Diagnostic accompanying `error_occurred`.
    pub error_message: Option<String>,
    /// Unknown non-numeric record fields, preserved verbatim for round-trips
    /// (e.g. `run_name` or `aggregate_name` written by newer emitters).
    pub extra: IndexMap<String, serde_json::Value>,
}

impl BenchmarkRecord {
    /// A record with the given name and all other fields at their defaults.
    pub fn new(name: impl Into<String>) -> BenchmarkRecord {
        let name = name.into();
        BenchmarkRecord {
            run_type: RunType::infer_from_name(&name),
            name,
            iterations: 0,
            real_time: 0.0,
            cpu_time: 0.0,
            time_unit: TimeUnit::Ns,
            counters: IndexMap::new(),
            error_occurred: false,
            error_message: None,
            extra: IndexMap::new(),
        }
    }
}

/// One enabled scope listed in the run context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeEntry {
    /// Scope name; never empty.
    pub name: String,
    /// Scope version string (free form).
    pub version: String,
}

/// The `context` block of a results document: machine and harness facts
/// recorded at run time.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunContext {
    /// Local date and time of the run.
    pub date: String,
    /// Path of the benchmark executable.
    pub executable: String,
    /// Number of logical CPUs.
    pub num_cpus: u32,
    /// Nominal CPU frequency in MHz.
    pub mhz_per_cpu: u32,
    /// Whether CPU frequency scaling was active.
    pub cpu_scaling_enabled: bool,
    /// Harness version string.
    pub scope_version: String,
    /// One entry per enabled scope.
    pub scopes: Vec<ScopeEntry>,
    /// Unknown context fields, preserved verbatim for round-trips.
    pub extra: IndexMap<String, serde_json::Value>,
}

/// A parsed benchmark results file: run context plus an ordered list of
/// benchmark records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsDocument {
    /// The `context` block.
    pub context: RunContext,
    /// The `benchmarks` array, in document order.
    pub benchmarks: Vec<BenchmarkRecord>,
}
