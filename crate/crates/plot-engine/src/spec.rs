//! Plot specification files: schema, loading, and dependency emission.

use serde::Deserialize;

use crate::error::PlotError;

/// What kind of figure a spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotType {
    /// Grouped vertical bars, one group per x value.
    Bar,
    /// A line per series with ±1-stddev error bars.
    ErrorbarLine,
    /// Scatter of samples, error bars, and a least-squares fit line.
    Regression,
}

impl PlotType {
    fn from_keyword(word: &str) -> Result<Self, PlotError> {
        match word {
            "bar" => Ok(PlotType::Bar),
            "errorbar" => Ok(PlotType::ErrorbarLine),
            "regplot" => Ok(PlotType::Regression),
            other => Err(PlotError::SpecSchema(format!(
                "unknown plot type {other:?} (expected \"bar\", \"errorbar\", or \"regplot\")"
            ))),
        }
    }
}

/// How an axis maps values to positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxisScale {
    #[default]
    Linear,
    Log10,
}

impl AxisScale {
    fn from_keyword(word: &str) -> Result<Self, PlotError> {
        match word {
            "linear" => Ok(AxisScale::Linear),
            "log10" => Ok(AxisScale::Log10),
            other => Err(PlotError::SpecSchema(format!(
                "unknown axis scale {other:?} (expected \"linear\" or \"log10\")"
            ))),
        }
    }
}

/// One axis: a label and a scale.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxisSpec {
    pub label: String,
    pub scale: AxisScale,
}

/// One data series: where it comes from and how its fields become (x, y).
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    /// Legend label.
    pub label: String,
    /// Path of the results document this series reads.
    pub input_file: String,
    /// Unanchored name filter over the document's records.
    pub regex: String,
    /// Field providing x: a fixed record field (`real_time`, `cpu_time`,
    /// `iterations`), a counter name, or `name_arg<k>` for the k-th
    /// slash-separated integer argument in the benchmark name.
    pub xfield: String,
    /// Field providing y; same grammar as `xfield`.
    pub yfield: String,
    /// Multiplier applied to every x value.
    pub xscale: f64,
    /// Multiplier applied to every y value.
    pub yscale: f64,
}

/// Output formats a spec can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Svg,
}

impl OutputFormat {
    fn from_keyword(word: &str) -> Result<Self, PlotError> {
        match word {
            "svg" => Ok(OutputFormat::Svg),
            other => Err(PlotError::SpecSchema(format!(
                "unknown output format {other:?} (only \"svg\" is supported)"
            ))),
        }
    }
}

/// One output file to write.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub name: String,
    pub format: OutputFormat,
}

/// A fully validated plot specification.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: Option<String>,
    pub plot_type: PlotType,
    pub x_axis: AxisSpec,
    pub y_axis: AxisSpec,
    pub series: Vec<SeriesSpec>,
    pub outputs: Vec<OutputSpec>,
}

// The raw shape of the YAML document. Unknown keys anywhere are schema
// errors: silently ignoring a typo like `yscale: 1e-6` misspelled would
// misrender a figure without a word of warning.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    title: Option<String>,
    #[serde(rename = "type")]
    plot_type: String,
    xaxis: Option<RawAxis>,
    yaxis: Option<RawAxis>,
    series: Option<Vec<RawSeries>>,
    output: Option<Vec<RawOutput>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    label: Option<String>,
    scale: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    label: String,
    input_file: String,
    regex: Option<String>,
    xfield: String,
    yfield: String,
    xscale: Option<f64>,
    yscale: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    name: String,
    format: Option<String>,
}

fn convert_axis(raw: Option<RawAxis>) -> Result<AxisSpec, PlotError> {
    let Some(raw) = raw else {
        return Ok(AxisSpec::default());
    };
    Ok(AxisSpec {
        label: raw.label.unwrap_or_default(),
        scale: match raw.scale {
            Some(word) => AxisScale::from_keyword(&word)?,
            None => AxisScale::Linear,
        },
    })
}

/// Parses and validates a spec file's text.
///
/// Defaults applied: series `regex` `".*"`, `xscale`/`yscale` `1.0`,
/// axes unlabeled and linear, output `format` `"svg"`. Unknown keys,
/// unknown enum words, and empty `series`/`output` lists are schema
/// errors.
pub fn load_spec(text: &str) -> Result<PlotSpec, PlotError> {
    let value: serde_yaml::Value =
        serde_yaml::from_str(text).map_err(|e| PlotError::SpecSyntax(e.to_string()))?;
    let raw: RawSpec =
        serde_yaml::from_value(value).map_err(|e| PlotError::SpecSchema(e.to_string()))?;

    let plot_type = PlotType::from_keyword(&raw.plot_type)?;
    let series_raw = raw
        .series
        .ok_or_else(|| PlotError::SpecSchema("missing series list".to_owned()))?;
    if series_raw.is_empty() {
        return Err(PlotError::SpecSchema(
            "series list must not be empty".to_owned(),
        ));
    }
    let outputs_raw = raw
        .output
        .ok_or_else(|| PlotError::SpecSchema("missing output list".to_owned()))?;
    if outputs_raw.is_empty() {
        return Err(PlotError::SpecSchema(
            "output list must not be empty".to_owned(),
        ));
    }

    let series = series_raw
        .into_iter()
        .map(|s| SeriesSpec {
            label: s.label,
            input_file: s.input_file,
            regex: s.regex.unwrap_or_else(|| ".*".to_owned()),
            xfield: s.xfield,
            yfield: s.yfield,
            xscale: s.xscale.unwrap_or(1.0),
            yscale: s.yscale.unwrap_or(1.0),
        })
        .collect();
    let outputs = outputs_raw
        .into_iter()
        .map(|o| {
            Ok(OutputSpec {
                name: o.name,
                format: match o.format {
                    Some(word) => OutputFormat::from_keyword(&word)?,
                    None => OutputFormat::Svg,
                },
            })
        })
        .collect::<Result<Vec<_>, PlotError>>()?;

    Ok(PlotSpec {
        title: raw.title,
        plot_type,
        x_axis: convert_axis(raw.xaxis)?,
        y_axis: convert_axis(raw.yaxis)?,
        series,
        outputs,
    })
}

fn escape_make_path(path: &str) -> String {
    path.replace(' ', "\\ ")
}

/// Emits the make-format dependency rule for a spec: every output as a
/// target, every distinct input file as a prerequisite (first-appearance
/// order), one newline-terminated line. Spaces in paths are
/// backslash-escaped.
pub fn spec_dependencies(spec: &PlotSpec) -> String {
    let targets: Vec<String> = spec
        .outputs
        .iter()
        .map(|o| escape_make_path(&o.name))
        .collect();
    let mut inputs: Vec<String> = Vec::new();
    for series in &spec.series {
        let escaped = escape_make_path(&series.input_file);
        if !inputs.contains(&escaped) {
            inputs.push(escaped);
        }
    }
    format!("{}: {}\n", targets.join(" "), inputs.join(" "))
}
