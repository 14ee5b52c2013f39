use regex::Regex;

use crate::error::Error;
use crate::model::ResultsDocument;

/// Compiles a name-filter pattern, mapping failures to [`Error::BadRegex`]
/// with a one-line reason and, when known, the byte offset of the problem
/// inside the pattern.
pub fn compile_regex(pattern: &str) -> Result<Regex, Error> {
    Regex::new(pattern).map_err(|err| {
        let detail = match err {
            regex::Error::CompiledTooBig(limit) => {
                format!("compiled pattern exceeds the size limit of {limit} bytes")
            }
            _ => match regex_syntax::Parser::new().parse(pattern) {
                Err(regex_syntax::Error::Parse(e)) => {
                    format!("{} (at byte {})", e.kind(), e.span().start.offset)
                }
                Err(regex_syntax::Error::Translate(e)) => {
                    format!("{} (at byte {})", e.kind(), e.span().start.offset)
                }
                _ => "unsupported pattern".to_string(),
            },
        };
        Error::BadRegex {
            pattern: pattern.to_string(),
            detail,
        }
    })
}

/// Concatenates documents: the result keeps the first document's context and
/// chains all inputs' record lists in argument order. Inputs are unmodified.
///
/// Plain text concatenation of JSON files would yield a malformed result;
/// this is the well-formed equivalent.
///
/// Errors: [`Error::EmptyInput`] when `docs` is empty.
pub fn concat_documents(docs: &[ResultsDocument]) -> Result<ResultsDocument, Error> {
    let first = docs.first().ok_or(Error::EmptyInput)?;
    Ok(ResultsDocument {
        context: first.context.clone(),
        benchmarks: docs
            .iter()
            .flat_map(|d| d.benchmarks.iter().cloned())
            .collect(),
    })
}

/// Keeps exactly the records whose name contains a match of `pattern`
/// (unanchored search). Relative order and the context are unchanged.
///
/// Errors: [`Error::BadRegex`] when the pattern fails to compile.
pub fn filter_by_name(doc: &ResultsDocument, pattern: &str) -> Result<ResultsDocument, Error> {
    let regex = compile_regex(pattern)?;
    Ok(ResultsDocument {
        context: doc.context.clone(),
        benchmarks: doc
            .benchmarks
            .iter()
            .filter(|r| regex.is_match(&r.name))
            .cloned()
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BenchmarkRecord;

    fn doc_with(names: &[&str]) -> ResultsDocument {
        ResultsDocument {
            context: Default::default(),
            benchmarks: names.iter().map(|n| BenchmarkRecord::new(*n)).collect(),
        }
    }

    fn names(doc: &ResultsDocument) -> Vec<&str> {
        doc.benchmarks.iter().map(|r| r.name.as_str()).collect()
    }

    #[test]
    fn concat_chains_records_and_keeps_first_context() {
        let mut a = doc_with(&["b1", "b2"]);
        a.context.executable = "first".into();
        let mut b = doc_with(&["b3"]);
        b.context.executable = "second".into();
        let merged = concat_documents(&[a, b]).unwrap();
        assert_eq!(names(&merged), ["b1", "b2", "b3"]);
        assert_eq!(merged.context.executable, "first");
    }

    #[test]
    fn concat_of_a_singleton_is_identity() {
        let d = doc_with(&["only"]);
        assert_eq!(concat_documents(std::slice::from_ref(&d)).unwrap(), d);
    }

    #[test]
    fn concat_is_associative_on_records() {
        let (a, b, c) = (doc_with(&["1"]), doc_with(&["2", "3"]), doc_with(&["4"]));
        let left = concat_documents(&[
            concat_documents(&[a.clone(), b.clone()]).unwrap(),
            c.clone(),
        ])
        .unwrap();
        let right = concat_documents(&[a, concat_documents(&[b, c]).unwrap()]).unwrap();
        assert_eq!(left.benchmarks, right.benchmarks);
    }

    #[test]
    fn concat_of_nothing_is_an_error() {
        assert!(matches!(concat_documents(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn filter_keeps_matching_names_in_order() {
        let d = doc_with(&["CUDA_Memcpy/1024", "CPU_Copy/1024"]);
        let kept = filter_by_name(&d, "^CUDA").unwrap();
        assert_eq!(names(&kept), ["CUDA_Memcpy/1024"]);
    }

    #[test]
    fn filter_match_all_is_identity() {
        let d = doc_with(&["a", "b", "c"]);
        assert_eq!(filter_by_name(&d, ".*").unwrap(), d);
    }

    #[test]
    fn filter_is_idempotent() {
        let d = doc_with(&["Copy/8", "Copy/64", "Noop"]);
        let once = filter_by_name(&d, "Copy").unwrap();
        let twice = filter_by_name(&once, "Copy").unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn filter_search_is_unanchored() {
        let d = doc_with(&["warmup_Copy/8", "Copy/8"]);
        let kept = filter_by_name(&d, "Copy").unwrap();
        assert_eq!(kept.benchmarks.len(), 2);
    }

    #[test]
    fn bad_patterns_report_reason_and_position() {
        let err = filter_by_name(&doc_with(&[]), "^CUDA(").unwrap_err();
        let text = err.to_string();
        assert!(text.contains("^CUDA("), "{text}");
        assert!(text.contains("at byte"), "{text}");
        assert_eq!(
            text.lines().count(),
            1,
            "diagnostic must be one line: {text}"
        );
    }
}
