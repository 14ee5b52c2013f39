//! The harness: scope registration and everything scopes contribute.

use bench_core::{BenchmarkDefinition, BenchmarkHandle, Registry, RegistryError};
use results_model::ScopeEntry;
use thiserror::Error;

use crate::hooks::{HookOutcome, HookPhase, InitHook};
use crate::options::OptionSpec;
use crate::parse;

/// Errors from scope and option registration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScopeError {
    /// A scope name was registered twice.
    #[error("duplicate scope name {0:?}")]
    DuplicateScope(String),
    /// Registration was attempted after the harness was frozen.
    #[error("scope registration attempted after the harness was frozen")]
    LateRegistration,
    /// The descriptor itself is malformed.
    #[error("invalid scope: {0}")]
    InvalidScope(String),
    /// An option flag collides with a core flag or another scope's flag,
    /// or is not a `--long` flag.
    #[error("invalid option flag {flag:?}: {reason}")]
    BadFlag { flag: String, reason: String },
    /// `--disable-scope` named a scope nobody registered.
    #[error("--disable-scope names unknown scope {0:?}")]
    UnknownScope(String),
    /// A benchmark contributed by the scope was rejected.
    #[error(transparent)]
    Benchmark(#[from] RegistryError),
}

/// A scope, described: its identity and the callback that contributes its
/// benchmarks, options, and hooks.
pub struct ScopeDescriptor {
    name: String,
    version: String,
    enabled: bool,
    register_fn: Box<dyn FnOnce(&mut ScopeContext) -> Result<(), ScopeError>>,
}

impl ScopeDescriptor {
    /// Describes an enabled scope. The callback runs during
    /// [`Harness::register_scope`] and receives a [`ScopeContext`] for its
    /// contributions.
    pub fn new(
        name: impl Into<String>,
        version: impl Into<String>,
        register_fn: impl FnOnce(&mut ScopeContext) -> Result<(), ScopeError> + 'static,
    ) -> Self {
        ScopeDescriptor {
            name: name.into(),
            version: version.into(),
            enabled: true,
            register_fn: Box::new(register_fn),
        }
    }

    /// Marks the scope disabled in code: it is recorded for name-collision
    /// purposes but contributes nothing.
    pub fn disabled(mut self) -> Self {
        self.enabled = false;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }
}

impl std::fmt::Debug for ScopeDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScopeDescriptor")
            .field("name", &self.name)
            .field("version", &self.version)
            .field("enabled", &self.enabled)
            .finish_non_exhaustive()
    }
}

/// The registration surface handed to a scope's callback.
pub struct ScopeContext<'a> {
    harness: &'a mut Harness,
    scope: String,
}

impl ScopeContext<'_> {
    /// The name of the scope being registered.
    pub fn scope_name(&self) -> &str {
        &self.scope
    }

    /// Contributes a benchmark, tagged with this scope as its owner.
    pub fn register_benchmark(
        &mut self,
        def: BenchmarkDefinition,
    ) -> Result<BenchmarkHandle, ScopeError> {
        let def = def.owned_by(self.scope.clone());
        Ok(self.harness.registry.register_benchmark(def)?)
    }

    /// Contributes a command-line option. The flag must be unique across
    /// core flags and every enabled scope's options.
    pub fn register_option(&mut self, option: OptionSpec) -> Result<(), ScopeError> {
        self.harness.add_option(option, &self.scope)
    }

    /// Contributes an initialization hook.
    pub fn register_init(&mut self, hook: InitHook) {
        self.harness.add_hook(hook, &self.scope);
    }
}

struct ScopeRecord {
    name: String,
    version: String,
    enabled: bool,
}

struct DisableRequest {
    name: String,
    matched: bool,
}

pub(crate) struct RegisteredOption {
    pub(crate) spec: OptionSpec,
    #[allow(dead_code)] // diagnostic breadcrumb; read by Debug and tests
    pub(crate) scope: String,
}

struct RegisteredHook {
    hook: InitHook,
    index: usize,
}

/// The harness owns everything scopes contribute — the benchmark registry,
/// the option table, and the init hooks — plus the core command-line
/// surface.
///
/// Lifecycle: create, apply `--disable-scope` requests
/// ([`Harness::set_disabled_scopes`]), register scopes, validate the
/// disable requests, [`freeze`](Harness::freeze), then run hooks and
/// [`parse_args`](Harness::parse_args).
pub struct Harness {
    version: String,
    pub(crate) registry: Registry,
    pub(crate) options: Vec<RegisteredOption>,
    hooks: Vec<RegisteredHook>,
    scopes: Vec<ScopeRecord>,
    disable_requests: Vec<DisableRequest>,
    frozen: bool,
}

impl Harness {
    /// Creates a harness reporting the given version string.
    pub fn new(version: impl Into<String>) -> Self {
        Harness {
            version: version.into(),
            registry: Registry::new(),
            options: Vec::new(),
            hooks: Vec::new(),
            scopes: Vec::new(),
            disable_requests: Vec::new(),
            frozen: false,
        }
    }

    /// Records the scope names requested disabled on the command line
    /// (see [`scan_disable_requests`](crate::scan_disable_requests)).
    /// Must be called before the affected scopes register.
    pub fn set_disabled_scopes(&mut self, names: impl IntoIterator<Item = String>) {
        self.disable_requests
            .extend(names.into_iter().map(|name| DisableRequest {
                name,
                matched: false,
            }));
    }

    /// Registers a scope. If it ends up enabled — neither disabled in code
    /// nor by request — its callback runs immediately and its
    /// contributions join the harness.
    pub fn register_scope(&mut self, descriptor: ScopeDescriptor) -> Result<(), ScopeError> {
        if self.frozen {
            return Err(ScopeError::LateRegistration);
        }
        if descriptor.name.is_empty() {
            return Err(ScopeError::InvalidScope(
                "scope name must not be empty".to_owned(),
            ));
        }
        if self.scopes.iter().any(|s| s.name == descriptor.name) {
            return Err(ScopeError::DuplicateScope(descriptor.name));
        }
        let mut requested_off = false;
        for request in &mut self.disable_requests {
            if request.name == descriptor.name {
                request.matched = true;
                requested_off = true;
            }
        }
        let enabled = descriptor.enabled && !requested_off;
        self.scopes.push(ScopeRecord {
            name: descriptor.name.clone(),
            version: descriptor.version.clone(),
            enabled,
        });
        if enabled {
            let mut ctx = ScopeContext {
                scope: descriptor.name,
                harness: self,
            };
            (descriptor.register_fn)(&mut ctx)?;
        }
        Ok(())
    }

    /// Fails if any `--disable-scope` request named a scope that never
    /// registered. Call after all scopes have registered.
    pub fn validate_disable_requests(&self) -> Result<(), ScopeError> {
        for request in &self.disable_requests {
            if !request.matched {
                return Err(ScopeError::UnknownScope(request.name.clone()));
            }
        }
        Ok(())
    }

    /// Ends the registration phase; scope and benchmark registration are
    /// rejected afterwards. Idempotent.
    pub fn freeze(&mut self) {
        self.frozen = true;
        self.registry.freeze();
    }

    /// The benchmark registry holding every enabled scope's benchmarks.
    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    /// The harness version string.
    pub fn version(&self) -> &str {
        &self.version
    }

    /// The `(name, version)` entries of the enabled scopes, in
    /// registration order — the roster recorded in a results document's
    /// context.
    pub fn scope_entries(&self) -> Vec<ScopeEntry> {
        self.scopes
            .iter()
            .filter(|s| s.enabled)
            .map(|s| ScopeEntry {
                name: s.name.clone(),
                version: s.version.clone(),
            })
            .collect()
    }

    /// The `--version` listing: the harness itself, then each enabled
    /// scope, one `<name> <version>` per line.
    pub fn version_lines(&self, harness_name: &str) -> String {
        let mut out = format!("{} {}\n", harness_name, self.version);
        for scope in self.scopes.iter().filter(|s| s.enabled) {
            out.push_str(&format!("{} {}\n", scope.name, scope.version));
        }
        out
    }

    /// Runs the hooks of `phase` in `(priority, registration order)` and
    /// returns the first [`HookOutcome::Exit`], or
    /// [`HookOutcome::Continue`] when every hook continued.
    pub fn run_init(&mut self, phase: HookPhase, argv: &[String]) -> HookOutcome {
        let mut selected: Vec<&mut RegisteredHook> = self
            .hooks
            .iter_mut()
            .filter(|h| h.hook.phase == phase)
            .collect();
        selected.sort_by_key(|h| (h.hook.priority, h.index));
        for registered in selected {
            match (registered.hook.callback)(argv) {
                HookOutcome::Continue => {}
                exit @ HookOutcome::Exit { .. } => return exit,
            }
        }
        HookOutcome::Continue
    }

    fn add_option(&mut self, option: OptionSpec, scope: &str) -> Result<(), ScopeError> {
        if !option.flag.starts_with("--") || option.flag.len() <= 2 {
            return Err(ScopeError::BadFlag {
                flag: option.flag,
                reason: "scope options must use the long --flag form".to_owned(),
            });
        }
        if parse::is_core_flag(&option.flag) {
            return Err(ScopeError::BadFlag {
                flag: option.flag,
                reason: "collides with a core flag".to_owned(),
            });
        }
        if let Some(existing) = self.options.iter().find(|o| o.spec.flag == option.flag) {
            return Err(ScopeError::BadFlag {
                flag: option.flag,
                reason: format!("already registered by scope {:?}", existing.scope),
            });
        }
        self.options.push(RegisteredOption {
            spec: option,
            scope: scope.to_owned(),
        });
        Ok(())
    }

    fn add_hook(&mut self, hook: InitHook, _scope: &str) {
        let index = self.hooks.len();
        self.hooks.push(RegisteredHook { hook, index });
    }

    /// One help line per scope option (flag with value placeholder, then
    /// the description), in registration order.
    pub fn option_help(&self) -> Vec<(String, String)> {
        self.options
            .iter()
            .map(|o| {
                let left = match o.spec.arity {
                    crate::ValueArity::Flag => o.spec.flag.clone(),
                    crate::ValueArity::OneValue => format!("{}=<value>", o.spec.flag),
                };
                (left, o.spec.description.clone())
            })
            .collect()
    }
}

impl std::fmt::Debug for Harness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Harness")
            .field("version", &self.version)
            .field("scopes", &self.scopes.len())
            .field("options", &self.options.len())
            .field("hooks", &self.hooks.len())
            .field("frozen", &self.frozen)
            .finish()
    }
}
