//! Declarative plotting for benchmark results documents.
//!
//! A YAML spec file names a plot type (`bar`, `errorbar`, or `regplot`),
//! axes, one or more series, and one or more SVG outputs. Each series
//! pulls records out of a results document by regex, picks an x and a y
//! field (fixed fields, counters, or `name_arg<k>` parsed from the
//! benchmark name), and scales them. Samples sharing an x are grouped
//! into mean ± sample-standard-deviation points; regression plots fit a
//! least-squares line through the ungrouped samples. Rendering is fully
//! deterministic — the same spec over the same data yields byte-identical
//! SVG — and the `spec_dependencies` helper emits the plot's input files
//! as a make rule so build systems can re-render only when results change.
//!
//! ```
//! use plot_engine::{build_series, load_spec, render, spec_dependencies};
//!
//! let spec = load_spec(
//!     "
//! type: errorbar
//! series:
//! - label: copy
//!   input_file: results.json
//!   xfield: name_arg0
//!   yfield: real_time
//! output:
//! - name: copy.svg
//! ",
//! )?;
//! assert_eq!(spec_dependencies(&spec), "copy.svg: results.json\n");
//!
//! let doc = results_model::parse_document(
//!     r#"{"context": {}, "benchmarks": [
//!         {"name": "Copy/8", "iterations": 5, "real_time": 2.0,
//!          "cpu_time": 2.0, "time_unit": "ns"},
//!         {"name": "Copy/64", "iterations": 5, "real_time": 9.0,
//!          "cpu_time": 9.0, "time_unit": "ns"}]}"#,
//! )?;
//! let series: Vec<_> = spec
//!     .series
//!     .iter()
//!     .map(|ss| build_series(ss, &doc))
//!     .collect::<Result<_, _>>()?;
//! let svg = render(&spec, &series)?;
//! assert!(svg.starts_with("<?xml") && svg.contains("<polyline"));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

mod error;
mod io;
mod render;
mod series;
mod spec;

pub use error::PlotError;
pub use io::atomic_write;
pub use render::{quick_bar, render, write_outputs};
pub use series::{build_series, linear_regression, PointStats, SeriesData};
pub use spec::{
    load_spec, spec_dependencies, AxisScale, AxisSpec, OutputFormat, OutputSpec, PlotSpec,
    PlotType, SeriesSpec,
};
