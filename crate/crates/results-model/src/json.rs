use serde_json::{Map, Value};

use crate::error::Error;
use crate::model::{BenchmarkRecord, ResultsDocument, RunContext, RunType, ScopeEntry, TimeUnit};

/// Parses a UTF-8 JSON results document.
///
/// The input must be a JSON object with a `context` object and a `benchmarks`
/// array. Each array element becomes a [`BenchmarkRecord`]; numeric fields
/// outside the fixed schema land in `counters`, non-numeric unknown fields
/// are preserved verbatim in `extra`, and `run_type` is inferred from the
/// name suffix when the key is absent.
///
/// Errors: [`Error::MalformedJson`] for syntax errors (with byte offset) and
/// [`Error::SchemaError`] for structural problems; both abort parsing.
pub fn parse_document(text: &str) -> Result<ResultsDocument, Error> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(text, &e))?;
    let root = value
        .as_object()
        .ok_or_else(|| Error::SchemaError("top level is not a JSON object".into()))?;
    let context = root
        .get("context")
        .ok_or_else(|| Error::SchemaError("missing \"context\" object".into()))?
        .as_object()
        .ok_or_else(|| Error::SchemaError("\"context\" is not an object".into()))?;
    let benchmarks = root
        .get("benchmarks")
        .ok_or_else(|| Error::SchemaError("missing \"benchmarks\" array".into()))?
        .as_array()
        .ok_or_else(|| Error::SchemaError("\"benchmarks\" is not an array".into()))?;

    let context = parse_context(context)?;
    let benchmarks = benchmarks
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let record = entry.as_object().ok_or_else(|| {
                Error::SchemaError(format!("benchmark entry {i} is not an object"))
            })?;
            parse_record(record, i)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ResultsDocument {
        context,
        benchmarks,
    })
}

/// Serializes a document to pretty-printed UTF-8 JSON text, `context` first,
/// then `benchmarks`. Record fields are emitted as `name`, `run_type`,
/// `iterations`, `real_time`, `cpu_time`, `time_unit`, then counters in
/// insertion order (error fields, when present, sit between `time_unit` and
/// the counters; preserved unknown fields come last).
///
/// `parse_document(serialize_document(d))` reproduces `d` field for field.
pub fn serialize_document(doc: &ResultsDocument) -> String {
    let mut root = Map::new();
    root.insert("context".into(), context_to_value(&doc.context));
    root.insert(
        "benchmarks".into(),
        Value::Array(doc.benchmarks.iter().map(record_to_value).collect()),
    );
    let mut text = serde_json::to_string_pretty(&Value::Object(root))
        .expect("document serialization is total");
    text.push('\n');
    text
}

/// Builds a [`Error::MalformedJson`] with the byte offset of `err`'s
/// line/column position inside `text`.
fn malformed(text: &str, err: &serde_json::Error) -> Error {
    let (line, column) = (err.line(), err.column());
    let mut offset = 0usize;
    for (n, l) in text.split_inclusive('\n').enumerate() {
        if n + 1 == line {
            offset += column.saturating_sub(1);
            break;
        }
        offset += l.len();
    }
    Error::MalformedJson {
        offset: offset.min(text.len()),
        message: err.to_string(),
    }
}

fn parse_context(map: &Map<String, Value>) -> Result<RunContext, Error> {
    let mut ctx = RunContext::default();
    for (key, value) in map {
        match key.as_str() {
            "date" => ctx.date = context_str(key, value)?,
            "executable" => ctx.executable = context_str(key, value)?,
            "num_cpus" => ctx.num_cpus = context_u32(key, value)?,
            "mhz_per_cpu" => ctx.mhz_per_cpu = context_u32(key, value)?,
            "cpu_scaling_enabled" => {
                ctx.cpu_scaling_enabled = value.as_bool().ok_or_else(|| {
                    Error::SchemaError(format!("context field \"{key}\" is not a boolean"))
                })?;
            }
            "scope_version" => ctx.scope_version = context_str(key, value)?,
            "scopes" => ctx.scopes = parse_scopes(value)?,
            _ => {
                ctx.extra.insert(key.clone(), value.clone());
            }
        }
    }
    Ok(ctx)
}

fn context_str(key: &str, value: &Value) -> Result<String, Error> {
    value
        .as_str()
        .map(str::to_owned)
        .ok_or_else(|| Error::SchemaError(format!("context field \"{key}\" is not a string")))
}

fn context_u32(key: &str, value: &Value) -> Result<u32, Error> {
    let as_int = value.as_u64().or_else(|| {
        value
            .as_f64()
            .filter(|v| v.fract() == 0.0 && *v >= 0.0)
            .map(|v| v as u64)
    });
    match as_int {
        Some(v) if v <= u32::MAX as u64 => Ok(v as u32),
        _ => Err(Error::SchemaError(format!(
            "context field \"{key}\" is not a non-negative integer"
        ))),
    }
}

fn parse_scopes(value: &Value) -> Result<Vec<ScopeEntry>, Error> {
    let entries = value
        .as_array()
        .ok_or_else(|| Error::SchemaError("context field \"scopes\" is not an array".into()))?;
    entries
        .iter()
        .map(|entry| {
            let obj = entry.as_object().filter(|o| o.get("name").is_some());
            let obj = obj.ok_or_else(|| {
                Error::SchemaError(
                    "context \"scopes\" entries must be objects with a \"name\"".into(),
                )
            })?;
            let name = obj.get("name").and_then(Value::as_str).unwrap_or_default();
            if name.is_empty() {
                return Err(Error::SchemaError(
                    "context \"scopes\" entry has an empty \"name\"".into(),
                ));
            }
            let version = obj
                .get("version")
                .and_then(Value::as_str)
                .unwrap_or_default();
            Ok(ScopeEntry {
                name: name.to_owned(),
                version: version.to_owned(),
            })
        })
        .collect()
}

fn parse_record(map: &Map<String, Value>, index: usize) -> Result<BenchmarkRecord, Error> {
    let name = match map.get("name").and_then(Value::as_str) {
        Some(n) if !n.is_empty() => n.to_owned(),
        _ => {
            return Err(Error::SchemaError(format!(
                "benchmark entry {index} is missing a non-empty \"name\""
            )))
        }
    };
    let mut record = BenchmarkRecord::new(name);
    for (key, value) in map {
        match key.as_str() {
            "name" => {}
            "run_type" => {
                record.run_type = match value.as_str() {
                    Some("iteration") => RunType::Iteration,
                    Some("aggregate") => RunType::Aggregate,
                    _ => {
                        return Err(Error::SchemaError(format!(
                            "record {:?} has unrecognized run_type {value}",
                            record.name
                        )))
                    }
                };
            }
            "iterations" => {
                let as_int = value.as_u64().or_else(|| {
                    value
                        .as_f64()
                        .filter(|v| v.fract() == 0.0 && *v >= 0.0)
                        .map(|v| v as u64)
                });
                record.iterations = as_int.ok_or_else(|| {
                    Error::SchemaError(format!(
                        "record {:?} field \"iterations\" is not a non-negative integer",
                        record.name
                    ))
                })?;
            }
            "real_time" => record.real_time = record_f64(&record.name, key, value)?,
            "cpu_time" => record.cpu_time = record_f64(&record.name, key, value)?,
            "time_unit" => {
                record.time_unit =
                    value
                        .as_str()
                        .and_then(TimeUnit::from_str_opt)
                        .ok_or_else(|| {
                            Error::SchemaError(format!(
                                "record {:?} has unrecognized time_unit {value}",
                                record.name
                            ))
                        })?;
            }
            "error_occurred" => {
                record.error_occurred = value.as_bool().ok_or_else(|| {
                    Error::SchemaError(format!(
                        "record {:?} field \"error_occurred\" is not a boolean",
                        record.name
                    ))
                })?;
            }
            "error_message" => {
                record.error_message = Some(
                    value
                        .as_str()
                        .ok_or_else(|| {
                            Error::SchemaError(format!(
                                "record {:?} field \"error_message\" is not a string",
                                record.name
                            ))
                        })?
                        .to_owned(),
                );
            }
            _ => match value.as_f64() {
                // Unknown numeric fields are user counters.
                Some(v) => {
                    record.counters.insert(key.clone(), v);
                }
                // Everything else is preserved verbatim.
                None => {
                    record.extra.insert(key.clone(), value.clone());
                }
            },
        }
    }
    Ok(record)
}

fn record_f64(name: &str, key: &str, value: &Value) -> Result<f64, Error> {
    value.as_f64().ok_or_else(|| {
        Error::SchemaError(format!("record {name:?} field \"{key}\" is not a number"))
    })
}

fn context_to_value(ctx: &RunContext) -> Value {
    let mut map = Map::new();
    map.insert("date".into(), Value::String(ctx.date.clone()));
    map.insert("executable".into(), Value::String(ctx.executable.clone()));
    map.insert("num_cpus".into(), Value::from(ctx.num_cpus));
    map.insert("mhz_per_cpu".into(), Value::from(ctx.mhz_per_cpu));
    map.insert(
        "cpu_scaling_enabled".into(),
        Value::Bool(ctx.cpu_scaling_enabled),
    );
    map.insert(
        "scope_version".into(),
        Value::String(ctx.scope_version.clone()),
    );
    let scopes = ctx
        .scopes
        .iter()
        .map(|s| {
            let mut entry = Map::new();
            entry.insert("name".into(), Value::String(s.name.clone()));
            entry.insert("version".into(), Value::String(s.version.clone()));
            Value::Object(entry)
        })
        .collect();
    map.insert("scopes".into(), Value::Array(scopes));
    for (key, value) in &ctx.extra {
        map.insert(key.clone(), value.clone());
    }
    Value::Object(map)
}

fn record_to_value(record: &BenchmarkRecord) -> Value {
    let mut map = Map::new();
    map.insert("name".into(), Value::String(record.name.clone()));
    map.insert(
        "run_type".into(),
        Value::String(record.run_type.as_str().into()),
    );
    map.insert("iterations".into(), Value::from(record.iterations));
    map.insert("real_time".into(), number(record.real_time));
    map.insert("cpu_time".into(), number(record.cpu_time));
    map.insert(
        "time_unit".into(),
        Value::String(record.time_unit.as_str().into()),
    );
    if record.error_occurred {
        map.insert("error_occurred".into(), Value::Bool(true));
    }
    if let Some(message) = &record.error_message {
        map.insert("error_message".into(), Value::String(message.clone()));
    }
    for (key, value) in &record.counters {
        map.insert(key.clone(), number(*value));
    }
    for (key, value) in &record.extra {
        map.insert(key.clone(), value.clone());
    }
    Value::Object(map)
}

/// Largest f64 whose neighborhood still represents every integer exactly.
const MAX_EXACT_INT: f64 = 9_007_199_254_740_992.0; // 2^53

/// Renders a numeric field: integral values become JSON integers
/// (`"bytes": 1024`), everything else uses the shortest decimal text that
/// round-trips to the same f64.
fn number(v: f64) -> Value {
    if v.is_finite() && v.fract() == 0.0 && v.abs() <= MAX_EXACT_INT {
        Value::from(v as i64)
    } else {
        // Non-finite values cannot occur in valid documents (JSON has no
        // representation for them); map them to 0 rather than panic.
        serde_json::Number::from_f64(v)
            .map(Value::Number)
            .unwrap_or_else(|| Value::from(0))
    }
}
