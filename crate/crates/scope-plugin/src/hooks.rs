//! Initialization hooks contributed by scopes.

/// When a hook runs relative to argument parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HookPhase {
    /// Before any argument binding has fired; sees the raw argument
    /// vector.
    BeforeParse,
    /// After all argument bindings have fired and before any benchmark
    /// executes.
    AfterParse,
}

/// What a hook decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HookOutcome {
    /// Proceed with startup.
    Continue,
    /// Stop the process with this status and message before any benchmark
    /// runs. An exit requested by a hook is a result, not a fault.
    Exit { code: i32, message: String },
}

/// One initialization hook.
///
/// Hooks of a phase run ordered by `(priority, registration order)`, lower
/// priority first; the default priority 0 therefore preserves plain
/// registration order. The first hook returning [`HookOutcome::Exit`]
/// short-circuits the rest.
pub struct InitHook {
    pub(crate) phase: HookPhase,
    pub(crate) priority: i32,
    pub(crate) callback: Box<dyn FnMut(&[String]) -> HookOutcome>,
}

impl InitHook {
    pub fn new(phase: HookPhase, callback: impl FnMut(&[String]) -> HookOutcome + 'static) -> Self {
        InitHook {
            phase,
            priority: 0,
            callback: Box::new(callback),
        }
    }

    /// Sets the ordering priority (lower runs first; default 0).
    pub fn priority(mut self, priority: i32) -> Self {
        self.priority = priority;
        self
    }
}

impl std::fmt::Debug for InitHook {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InitHook")
            .field("phase", &self.phase)
            .field("priority", &self.priority)
            .finish_non_exhaustive()
    }
}
