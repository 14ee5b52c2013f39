/// Errors produced by document operations.
///
/// Every variant renders as a single diagnostic line.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input is not syntactically valid JSON. `offset` is the byte
    /// position of the failure in the input text.
    #[error("malformed JSON at byte {offset}: {message}")]
    MalformedJson {
        /// Byte offset of the syntax error in the input.
        offset: usize,
        /// Parser diagnostic.
        message: String,
    },
    /// The input is valid JSON but not a results document (for example the
    /// `benchmarks` array is missing, or a record has no `name`).
    #[error("schema error: {0}")]
    SchemaError(String),
    /// A name filter pattern failed to compile. `detail` carries the reason
    /// and, when known, the byte offset inside the pattern.
    #[error("invalid regex {pattern:?}: {detail}")]
    BadRegex {
        /// The pattern as supplied.
        pattern: String,
        /// One-line reason, with position when available.
        detail: String,
    },
    /// Concatenation was asked to combine zero documents.
    #[error("empty input: no documents to concatenate")]
    EmptyInput,
}
