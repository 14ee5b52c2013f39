use std::collections::BTreeSet;

use crate::model::ResultsDocument;

/// One cell of a [`Frame`]: a number, a string (for `name` and `time_unit`),
/// or null where a record lacks the column's field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// The record has no value for this column.
    Null,
    /// A numeric value, copied exactly from the record.
    Num(f64),
    /// A textual value (`name`, `time_unit`).
    Str(String),
}

impl Cell {
    /// The numeric value, if this cell holds one.
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    /// The textual value, if this cell holds one.
    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Str(s) => Some(s),
            _ => None,
        }
    }
}

/// A tabular view of a results document: one row per record, one column per
/// field. Columns are `name`, `iterations`, `real_time`, `cpu_time`,
/// `time_unit`, then every counter name appearing in any record, sorted
/// lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    /// Column names, in presentation order.
    pub columns: Vec<String>,
    /// Rows, each aligned with `columns`.
    pub rows: Vec<Vec<Cell>>,
}

impl Frame {
    /// Index of a column by name.
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// The cell at `row` in the column called `column`, if both exist.
    pub fn cell(&self, row: usize, column: &str) -> Option<&Cell> {
        let col = self.column_index(column)?;
        self.rows.get(row)?.get(col)
    }
}

/// Converts a document to a [`Frame`]. Cells missing a column's field are
/// [`Cell::Null`]; numeric values are copied exactly, with no rounding.
pub fn to_frame(doc: &ResultsDocument) -> Frame {
    let counter_names: BTreeSet<&str> = doc
        .benchmarks
        .iter()
        .flat_map(|r| r.counters.keys().map(String::as_str))
        .collect();
    let mut columns: Vec<String> = ["name", "iterations", "real_time", "cpu_time", "time_unit"]
        .into_iter()
        .map(str::to_owned)
        .collect();
    columns.extend(counter_names.iter().map(|&c| c.to_owned()));

    let rows = doc
        .benchmarks
        .iter()
        .map(|r| {
            let mut row = vec![
                Cell::Str(r.name.clone()),
                Cell::Num(r.iterations as f64),
                Cell::Num(r.real_time),
                Cell::Num(r.cpu_time),
                Cell::Str(r.time_unit.as_str().to_owned()),
            ];
            row.extend(
                counter_names
                    .iter()
                    .map(|&c| r.counters.get(c).map_or(Cell::Null, |&v| Cell::Num(v))),
            );
            row
        })
        .collect();
    Frame { columns, rows }
}
