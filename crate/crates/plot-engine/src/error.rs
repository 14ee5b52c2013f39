//! Errors for the plotting pipeline.

use thiserror::Error;

/// Everything that can go wrong between a spec file and an SVG.
#[derive(Debug, Error)]
pub enum PlotError {
    /// The spec file is not parseable YAML at all.
    #[error("plot spec is not valid YAML: {0}")]
    SpecSyntax(String),
    /// The spec parsed but violates the schema (missing or unknown keys,
    /// bad enum values, empty sections).
    #[error("plot spec schema error: {0}")]
    SpecSchema(String),
    /// A results-document error: unreadable JSON or a bad series regex.
    #[error(transparent)]
    Model(#[from] results_model::Error),
    /// No matched record carries the named field.
    #[error("no matched record carries field {0:?}")]
    MissingField(String),
    /// Every series extracted zero points; there is nothing to draw.
    #[error("every series is empty; nothing to plot")]
    EmptyPlot,
    /// A log-scaled axis was asked to place a non-positive value.
    #[error("log10 axis requires strictly positive values, got {0}")]
    LogAxisDomain(f64),
    /// A regression series has fewer than two distinct x values.
    #[error("regression needs at least two distinct x values")]
    DegenerateRegression,
    /// A file could not be read or written.
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl PlotError {
    pub(crate) fn io(path: impl Into<String>, err: impl std::fmt::Display) -> Self {
        PlotError::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }
}
