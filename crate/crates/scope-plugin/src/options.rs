//! Command-line options contributed by scopes.

/// Whether a flag stands alone or consumes one value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueArity {
    /// A boolean switch. Its binding receives `"true"` when the flag is
    /// given bare, or the explicit text after `=`.
    Flag,
    /// Takes exactly one value, either as `--flag=value` or as the next
    /// argument.
    OneValue,
}

/// One command-line option contributed by a scope.
pub struct OptionSpec {
    pub(crate) flag: String,
    pub(crate) arity: ValueArity,
    pub(crate) description: String,
    pub(crate) binding: Box<dyn FnMut(&str) -> Result<(), String>>,
}

impl OptionSpec {
    /// Creates an option. `flag` must be the long form including the
    /// leading `--`. The binding receives the textual value each time the
    /// flag appears and may reject it with a message.
    pub fn new(
        flag: impl Into<String>,
        arity: ValueArity,
        description: impl Into<String>,
        binding: impl FnMut(&str) -> Result<(), String> + 'static,
    ) -> Self {
        OptionSpec {
            flag: flag.into(),
            arity,
            description: description.into(),
            binding: Box::new(binding),
        }
    }

    pub fn flag(&self) -> &str {
        &self.flag
    }

    pub fn arity(&self) -> ValueArity {
        self.arity
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl std::fmt::Debug for OptionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OptionSpec")
            .field("flag", &self.flag)
            .field("arity", &self.arity)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}
