//! Benchmark definitions and the registry that owns them.

use thiserror::Error;

use crate::state::BenchState;

/// The callable body of a benchmark.
pub type BenchmarkBody = Box<dyn Fn(&mut BenchState) + Send + Sync>;

/// One registered benchmark: a name, a body, and the per-definition knobs
/// that refine how the runner treats it.
///
/// A definition with argument tuples expands into one runnable *instance*
/// per tuple; the instance name appends each tuple element to the base name
/// separated by `/` (`Copy/4096`, `Grid/64/8`). A definition without
/// arguments is a single instance under its base name.
pub struct BenchmarkDefinition {
    base_name: String,
    args: Vec<Vec<i64>>,
    body: BenchmarkBody,
    uses_manual_time: bool,
    min_time_override: Option<f64>,
    repetitions_override: Option<u32>,
    owning_scope: Option<String>,
}

impl BenchmarkDefinition {
    pub fn new(
        base_name: impl Into<String>,
        body: impl Fn(&mut BenchState) + Send + Sync + 'static,
    ) -> Self {
        BenchmarkDefinition {
            base_name: base_name.into(),
            args: Vec::new(),
            body: Box::new(body),
            uses_manual_time: false,
            min_time_override: None,
            repetitions_override: None,
            owning_scope: None,
        }
    }

    /// Adds a single-element argument tuple.
    pub fn arg(mut self, value: i64) -> Self {
        self.args.push(vec![value]);
        self
    }

    /// Adds a multi-element argument tuple.
    pub fn args(mut self, tuple: &[i64]) -> Self {
        self.args.push(tuple.to_vec());
        self
    }

    /// Marks the benchmark as reporting its own per-iteration time via
    /// [`BenchState::set_iteration_time`]; the runner then uses that
    /// accumulated time instead of the wall clock to drive iteration
    /// decisions and to compute the reported real time.
    pub fn manual_time(mut self) -> Self {
        self.uses_manual_time = true;
        self
    }

    /// Overrides the global minimum running time (seconds) for this
    /// benchmark only.
    pub fn min_time(mut self, seconds: f64) -> Self {
        self.min_time_override = Some(seconds);
        self
    }

    /// Overrides the global repetition count for this benchmark only.
    pub fn repetitions(mut self, count: u32) -> Self {
        self.repetitions_override = Some(count);
        self
    }

    /// Records which scope registered this benchmark (informational).
    pub fn owned_by(mut self, scope: impl Into<String>) -> Self {
        self.owning_scope = Some(scope.into());
        self
    }

    pub fn base_name(&self) -> &str {
        &self.base_name
    }

    pub fn uses_manual_time(&self) -> bool {
        self.uses_manual_time
    }

    pub fn min_time_override(&self) -> Option<f64> {
        self.min_time_override
    }

    pub fn repetitions_override(&self) -> Option<u32> {
        self.repetitions_override
    }

    pub fn owning_scope(&self) -> Option<&str> {
        self.owning_scope.as_deref()
    }

    pub(crate) fn body(&self) -> &BenchmarkBody {
        &self.body
    }

    fn instance_names(&self) -> Vec<(String, Vec<i64>)> {
        if self.args.is_empty() {
            return vec![(self.base_name.clone(), Vec::new())];
        }
        self.args
            .iter()
            .map(|tuple| {
                let mut name = self.base_name.clone();
                for value in tuple {
                    name.push('/');
                    name.push_str(&value.to_string());
                }
                (name, tuple.clone())
            })
            .collect()
    }

    fn validate(&self) -> Result<(), RegistryError> {
        if self.base_name.is_empty() {
            return Err(RegistryError::InvalidDefinition(
                "benchmark name must not be empty".to_owned(),
            ));
        }
        if self.base_name.contains('/') {
            return Err(RegistryError::InvalidDefinition(format!(
                "benchmark name {:?} must not contain '/' (it is reserved for argument suffixes)",
                self.base_name
            )));
        }
        if let Some(first) = self.args.first() {
            if first.is_empty() {
                return Err(RegistryError::InvalidDefinition(format!(
                    "benchmark {:?} has an empty argument tuple",
                    self.base_name
                )));
            }
            if self.args.iter().any(|tuple| tuple.len() != first.len()) {
                return Err(RegistryError::InvalidDefinition(format!(
                    "benchmark {:?} mixes argument tuples of different lengths",
                    self.base_name
                )));
            }
        }
        if let Some(t) = self.min_time_override {
            if !(t > 0.0) {
                return Err(RegistryError::InvalidDefinition(format!(
                    "benchmark {:?} overrides min_time with non-positive {t}",
                    self.base_name
                )));
            }
        }
        if self.repetitions_override == Some(0) {
            return Err(RegistryError::InvalidDefinition(format!(
                "benchmark {:?} overrides repetitions with 0",
                self.base_name
            )));
        }
        Ok(())
    }
}

impl std::fmt::Debug for BenchmarkDefinition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BenchmarkDefinition")
            .field("base_name", &self.base_name)
            .field("args", &self.args)
            .field("uses_manual_time", &self.uses_manual_time)
            .field("min_time_override", &self.min_time_override)
            .field("repetitions_override", &self.repetitions_override)
            .field("owning_scope", &self.owning_scope)
            .finish_non_exhaustive()
    }
}

/// Opaque receipt for a successful registration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchmarkHandle(usize);

/// One runnable benchmark instance, borrowed from the registry.
#[derive(Clone, Copy)]
pub struct InstanceRef<'a> {
    name: &'a str,
    args: &'a [i64],
    def: &'a BenchmarkDefinition,
}

impl<'a> InstanceRef<'a> {
    /// The full instance name, argument suffixes included.
    pub fn name(&self) -> &'a str {
        self.name
    }

    /// The argument tuple this instance was expanded from (empty for
    /// argument-less benchmarks).
    pub fn args(&self) -> &'a [i64] {
        self.args
    }

    /// The definition this instance belongs to.
    pub fn definition(&self) -> &'a BenchmarkDefinition {
        self.def
    }
}

impl std::fmt::Debug for InstanceRef<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InstanceRef")
            .field("name", &self.name)
            .field("args", &self.args)
            .finish_non_exhaustive()
    }
}

/// Errors from benchmark registration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    /// An instance name collides with one already registered.
    #[error("duplicate benchmark name {0:?}")]
    DuplicateName(String),
    /// Registration was attempted after the registry was frozen.
    #[error("benchmark registration attempted after the registry was frozen")]
    LateRegistration,
    /// The definition itself is malformed.
    #[error("invalid benchmark definition: {0}")]
    InvalidDefinition(String),
}

struct Instance {
    name: String,
    def_index: usize,
    args: Vec<i64>,
}

/// The set of registered benchmarks.
///
/// Registration is only allowed before [`Registry::freeze`]; afterwards the
/// registry is immutable and can be shared freely with the runner. Instance
/// order is registration order, with a definition's argument tuples
/// expanding in the order they were added.
#[derive(Default)]
pub struct Registry {
    defs: Vec<BenchmarkDefinition>,
    instances: Vec<Instance>,
    frozen: bool,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Validates and registers a definition, expanding its instances.
    pub fn register_benchmark(
        &mut self,
        def: BenchmarkDefinition,
    ) -> Result<BenchmarkHandle, RegistryError> {
        if self.frozen {
            return Err(RegistryError::LateRegistration);
        }
        def.validate()?;
        let expanded = def.instance_names();
        for (name, _) in &expanded {
            if self.instances.iter().any(|i| &i.name == name) {
                return Err(RegistryError::DuplicateName(name.clone()));
            }
        }
        let def_index = self.defs.len();
        self.defs.push(def);
        for (name, args) in expanded {
            self.instances.push(Instance {
                name,
                def_index,
                args,
            });
        }
        Ok(BenchmarkHandle(def_index))
    }

    /// Ends the registration phase. Idempotent.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Number of runnable instances (not definitions).
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// All instances, in registration order.
    pub fn instances(&self) -> impl Iterator<Item = InstanceRef<'_>> {
        self.instances.iter().map(move |inst| InstanceRef {
            name: &inst.name,
            args: &inst.args,
            def: &self.defs[inst.def_index],
        })
    }

    /// Looks up a single instance by its full name.
    pub fn instance(&self, name: &str) -> Option<InstanceRef<'_>> {
        self.instances().find(|inst| inst.name() == name)
    }
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("definitions", &self.defs.len())
            .field("instances", &self.instances.len())
            .field("frozen", &self.frozen)
            .finish()
    }
}
