//! Object model for benchmark results documents.
//!
//! A results document is the JSON file a benchmark run produces: a `context`
//! block describing the machine and harness, followed by an ordered list of
//! benchmark records. The format is compatible with the JSON emitted by the
//! Google Benchmark library, so documents produced by either tool can be fed
//! to consumers of the other.
//!
//! This crate is pure data plumbing: parsing ([`parse_document`]),
//! serialization ([`serialize_document`]), concatenation
//! ([`concat_documents`]), regex name filtering ([`filter_by_name`]) and
//! conversion to a tabular [`Frame`] ([`to_frame`]). All types are immutable
//! after construction and every operation is a pure function, so values can
//! be shared freely across threads.
//!
//! Compatibility notes:
//!
//! * Numeric record fields outside the fixed schema (for example
//!   `bytes_per_second`) are preserved as [`BenchmarkRecord::counters`].
//! * Non-numeric unknown record fields and unknown context fields are
//!   preserved verbatim and re-emitted on serialization, so documents from
//!   newer Google Benchmark versions round-trip without loss.
//! * `run_type` is inferred from the `_mean`/`_median`/`_stddev` name suffix
//!   when the key is absent (older emitters did not write it).

mod error;
mod frame;
mod json;
mod model;
mod ops;

pub use error::Error;
pub use frame::{to_frame, Cell, Frame};
pub use json::{parse_document, serialize_document};
pub use model::{BenchmarkRecord, ResultsDocument, RunContext, RunType, ScopeEntry, TimeUnit};
pub use ops::{compile_regex, concat_documents, filter_by_name};
