//! Deterministic SVG rendering.
//!
//! One fixed 800×600 canvas with 60 px margins; all geometry is computed
//! with plain IEEE arithmetic and formatted with fixed precision, so
//! identical inputs yield byte-identical output on every platform.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::PlotError;
use crate::io::atomic_write;
use crate::series::{build_series, linear_regression, SeriesData};
use crate::spec::{AxisScale, AxisSpec, OutputFormat, OutputSpec, PlotSpec, PlotType, SeriesSpec};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PLOT_LEFT: f64 = 60.0;
const PLOT_RIGHT: f64 = WIDTH - 60.0;
const PLOT_TOP: f64 = 60.0;
const PLOT_BOTTOM: f64 = HEIGHT - 60.0;
const TARGET_TICKS: f64 = 5.0;

/// Series colors, assigned by declaration order and recycled past six.
const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

const STYLE: &str = "\
<style>
text { font-family: 'DejaVu Sans', Verdana, sans-serif; font-size: 12px; fill: #333333; }
.title { font-size: 16px; }
.grid { stroke: #dddddd; }
.tick { stroke: #333333; }
.plot-frame { fill: none; stroke: #333333; }
.data-line { fill: none; stroke-width: 1.5; }
.data-errbar { stroke-width: 1.5; }
.data-fit { stroke-width: 1.5; stroke-dasharray: 6 3; }
</style>
";

/// 10^e by repeated multiplication/division: deterministic everywhere,
/// unlike a libm `powf`.
fn pow10(e: i32) -> f64 {
    let mut v = 1.0;
    if e >= 0 {
        for _ in 0..e {
            v *= 10.0;
        }
    } else {
        for _ in 0..-e {
            v /= 10.0;
        }
    }
    v
}

/// floor(log10(v)) for v > 0, again by repeated scaling.
fn floor_log10(v: f64) -> i32 {
    debug_assert!(v > 0.0 && v.is_finite());
    let mut x = v;
    let mut e = 0;
    while x >= 10.0 {
        x /= 10.0;
        e += 1;
    }
    while x < 1.0 {
        x *= 10.0;
        e -= 1;
    }
    e
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Strips the sign from a formatted zero ("-0", "-0.00") so that signed
/// zeros cannot make two otherwise identical plots differ.
fn normalize_zero(s: String) -> String {
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_owned()
    } else {
        s
    }
}

/// Pixel coordinate: two fixed decimals.
fn fmt_px(v: f64) -> String {
    normalize_zero(format!("{v:.2}"))
}

/// Tick label with the number of decimals implied by the step size.
fn fmt_tick(v: f64, decimals: usize) -> String {
    normalize_zero(format!("{v:.decimals$}"))
}

/// Categorical slot label: shortest round-trip form.
fn fmt_slot(v: f64) -> String {
    normalize_zero(format!("{v}"))
}

/// A computed axis: tick positions and labels, and the pixel interval the
/// domain maps onto (inverted for y).
struct Axis {
    scale: AxisScale,
    /// Value-space lower bound; log axes clamp drawn values at it.
    floor: f64,
    /// Transformed domain (identity for linear, log10 exponents for log).
    t0: f64,
    t1: f64,
    p0: f64,
    p1: f64,
    ticks: Vec<(f64, String)>,
}

impl Axis {
    /// Nice-number linear axis: step = 1, 2, or 5 × 10^k chosen to give
    /// about [`TARGET_TICKS`] intervals, domain widened to tick multiples.
    fn linear(lo: f64, hi: f64, p0: f64, p1: f64) -> Axis {
        let (lo, hi) = if lo == hi {
            (lo - 1.0, hi + 1.0)
        } else {
            (lo, hi)
        };
        let raw = (hi - lo) / TARGET_TICKS;
        let mut e = floor_log10(raw);
        let base = raw / pow10(e);
        let mult = if base <= 1.0 {
            1.0
        } else if base <= 2.0 {
            2.0
        } else if base <= 5.0 {
            5.0
        } else {
            e += 1;
            1.0
        };
        let step = mult * pow10(e);
        let lo_idx = (lo / step).floor();
        let hi_idx = (hi / step).ceil();
        let decimals = (-e).max(0) as usize;
        let n = (hi_idx - lo_idx) as i64;
        let ticks = (0..=n)
            .map(|i| {
                let v = (lo_idx + i as f64) * step;
                (v, fmt_tick(v, decimals))
            })
            .collect();
        let (d0, d1) = (lo_idx * step, hi_idx * step);
        Axis {
            scale: AxisScale::Linear,
            floor: d0,
            t0: d0,
            t1: d1,
            p0,
            p1,
            ticks,
        }
    }

    /// Log axis: one tick per power of ten covering [lo, hi]; requires
    /// lo > 0 (validated by the caller).
    fn log10(lo: f64, hi: f64, p0: f64, p1: f64) -> Axis {
        debug_assert!(lo > 0.0 && hi >= lo);
        let e_lo = floor_log10(lo);
        let mut e_hi = floor_log10(hi);
        if pow10(e_hi) < hi {
            e_hi += 1;
        }
        if e_hi == e_lo {
            e_hi += 1;
        }
        let ticks = (e_lo..=e_hi)
            .map(|e| {
                let v = pow10(e);
                (v, fmt_tick(v, (-e).max(0) as usize))
            })
            .collect();
        Axis {
            scale: AxisScale::Log10,
            floor: pow10(e_lo),
            t0: e_lo as f64,
            t1: e_hi as f64,
            p0,
            p1,
            ticks,
        }
    }

    /// Value → pixel. On log axes, values at or below the domain floor
    /// clamp to it (an error-bar tail reaching zero stops at the axis).
    fn to_px(&self, v: f64) -> f64 {
        let t = match self.scale {
            AxisScale::Linear => v,
            AxisScale::Log10 => v.max(self.floor).log10(),
        };
        self.p0 + (t - self.t0) / (self.t1 - self.t0) * (self.p1 - self.p0)
    }
}

/// Horizontal placement: a numeric axis, or one categorical slot per
/// distinct x value for bar charts.
enum XCoords {
    Axis(Axis),
    Slots(Vec<f64>),
}

fn slot_center(slots: &[f64], i: usize) -> f64 {
    let w = (PLOT_RIGHT - PLOT_LEFT) / slots.len() as f64;
    PLOT_LEFT + (i as f64 + 0.5) * w
}

fn range(vals: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Renders the plot as one self-contained SVG 1.1 document. All declared
/// outputs share this text; [`write_outputs`] copies it to each path.
///
/// `series` must be the result of [`build_series`] applied to `spec.series`
/// in order. Errors: [`PlotError::EmptyPlot`] when every series has zero
/// points, [`PlotError::LogAxisDomain`] when a log axis would see a value
/// ≤ 0, [`PlotError::DegenerateRegression`] for a regression series whose
/// samples share one x.
pub fn render(spec: &PlotSpec, series: &[SeriesData]) -> Result<String, PlotError> {
    debug_assert_eq!(spec.series.len(), series.len());
    if series.iter().all(SeriesData::is_empty) {
        return Err(PlotError::EmptyPlot);
    }

    let y_log = spec.y_axis.scale == AxisScale::Log10;
    // A bar chart's x positions are categorical slots, so the x scale
    // only applies to the numeric plot types.
    let x_log = spec.x_axis.scale == AxisScale::Log10 && spec.plot_type != PlotType::Bar;

    let fits: Vec<Option<(f64, f64)>> = if spec.plot_type == PlotType::Regression {
        series
            .iter()
            .map(|s| {
                if s.samples.is_empty() {
                    Ok(None)
                } else {
                    linear_regression(&s.samples).map(Some)
                }
            })
            .collect::<Result<_, _>>()?
    } else {
        vec![None; series.len()]
    };

    // Collect the values that define each axis. The y extent includes
    // error-bar ends and fit-line endpoints so nothing draws outside the
    // plot; on a log axis only the (positive) centers define the floor.
    let mut x_vals = Vec::new();
    let mut y_lo_vals = Vec::new();
    let mut y_hi_vals = Vec::new();
    for (si, s) in series.iter().enumerate() {
        match spec.plot_type {
            PlotType::Bar => {
                for p in &s.points {
                    x_vals.push(p.x);
                    y_lo_vals.push(p.y);
                    y_hi_vals.push(p.y);
                }
            }
            PlotType::ErrorbarLine => {
                for p in &s.points {
                    x_vals.push(p.x);
                    y_hi_vals.push(p.y + p.yerr);
                    y_lo_vals.push(if y_log { p.y } else { p.y - p.yerr });
                }
            }
            PlotType::Regression => {
                for &(x, y) in &s.samples {
                    x_vals.push(x);
                    y_lo_vals.push(y);
                    y_hi_vals.push(y);
                }
                for p in &s.points {
                    y_hi_vals.push(p.y + p.yerr);
                    if !y_log {
                        y_lo_vals.push(p.y - p.yerr);
                    }
                }
                if let Some((slope, intercept)) = fits[si] {
                    let ends = [s.samples[0].0, s.samples[s.samples.len() - 1].0];
                    for x in ends {
                        let fy = slope * x + intercept;
                        if y_log {
                            if fy > 0.0 {
                                y_hi_vals.push(fy);
                            }
                        } else {
                            y_lo_vals.push(fy);
                            y_hi_vals.push(fy);
                        }
                    }
                }
            }
        }
    }
    if spec.plot_type == PlotType::Bar && !y_log {
        // Bars grow from a zero baseline.
        y_lo_vals.push(0.0);
        y_hi_vals.push(0.0);
    }

    if x_log {
        if let Some(&v) = x_vals.iter().find(|v| **v <= 0.0) {
            return Err(PlotError::LogAxisDomain(v));
        }
    }
    if y_log {
        if let Some(&v) = y_lo_vals.iter().find(|v| **v <= 0.0) {
            return Err(PlotError::LogAxisDomain(v));
        }
    }

    let x_coords = if spec.plot_type == PlotType::Bar {
        let mut slots = x_vals.clone();
        slots.sort_by(f64::total_cmp);
        slots.dedup();
        XCoords::Slots(slots)
    } else {
        let (lo, hi) = range(&x_vals);
        XCoords::Axis(if x_log {
            Axis::log10(lo, hi, PLOT_LEFT, PLOT_RIGHT)
        } else {
            Axis::linear(lo, hi, PLOT_LEFT, PLOT_RIGHT)
        })
    };
    let (y_lo, _) = range(&y_lo_vals);
    let (_, y_hi) = range(&y_hi_vals);
    let y_axis = if y_log {
        Axis::log10(y_lo, y_hi, PLOT_BOTTOM, PLOT_TOP)
    } else {
        Axis::linear(y_lo, y_hi, PLOT_BOTTOM, PLOT_TOP)
    };

    let mut svg = String::new();
    let out = &mut svg;
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    out.push_str(STYLE);
    writeln!(
        out,
        r##"<rect class="background" x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    )
    .unwrap();
    if let Some(title) = &spec.title {
        writeln!(
            out,
            r#"<text class="title" x="400.00" y="32.00" text-anchor="middle">{}</text>"#,
            escape_xml(title)
        )
        .unwrap();
    }

    // Gridlines.
    for (v, _) in &y_axis.ticks {
        let py = fmt_px(y_axis.to_px(*v));
        writeln!(
            out,
            r#"<line class="grid" x1="{}" y1="{py}" x2="{}" y2="{py}"/>"#,
            fmt_px(PLOT_LEFT),
            fmt_px(PLOT_RIGHT)
        )
        .unwrap();
    }
    if let XCoords::Axis(ax) = &x_coords {
        for (v, _) in &ax.ticks {
            let px = fmt_px(ax.to_px(*v));
            writeln!(
                out,
                r#"<line class="grid" x1="{px}" y1="{}" x2="{px}" y2="{}"/>"#,
                fmt_px(PLOT_TOP),
                fmt_px(PLOT_BOTTOM)
            )
            .unwrap();
        }
    }

    // Data, one group per declared series.
    for (si, s) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        writeln!(
            out,
            r#"<g class="series" data-label="{}">"#,
            escape_xml(&s.label)
        )
        .unwrap();
        match spec.plot_type {
            PlotType::Bar => {
                let XCoords::Slots(slots) = &x_coords else {
                    unreachable!()
                };
                let slot_w = (PLOT_RIGHT - PLOT_LEFT) / slots.len() as f64;
                let group_w = 0.8 * slot_w;
                let bar_w = group_w / series.len() as f64;
                let base_py = if y_log {
                    PLOT_BOTTOM
                } else {
                    y_axis.to_px(0.0)
                };
                for p in &s.points {
                    let Ok(slot) = slots.binary_search_by(|v| v.total_cmp(&p.x)) else {
                        continue;
                    };
                    let x0 = slot_center(slots, slot) - group_w / 2.0 + si as f64 * bar_w;
                    let py = y_axis.to_px(p.y);
                    writeln!(
                        out,
                        r#"<rect class="data-bar" x="{}" y="{}" width="{}" height="{}" fill="{color}"/>"#,
                        fmt_px(x0),
                        fmt_px(py.min(base_py)),
                        fmt_px(bar_w),
                        fmt_px((base_py - py).abs())
                    )
                    .unwrap();
                }
            }
            PlotType::ErrorbarLine => {
                let XCoords::Axis(ax) = &x_coords else {
                    unreachable!()
                };
                if !s.points.is_empty() {
                    let pts: Vec<String> = s
                        .points
                        .iter()
                        .map(|p| format!("{},{}", fmt_px(ax.to_px(p.x)), fmt_px(y_axis.to_px(p.y))))
                        .collect();
                    writeln!(
                        out,
                        r#"<polyline class="data-line" points="{}" stroke="{color}"/>"#,
                        pts.join(" ")
                    )
                    .unwrap();
                }
                error_segments(out, ax, &y_axis, s, color);
            }
            PlotType::Regression => {
                let XCoords::Axis(ax) = &x_coords else {
                    unreachable!()
                };
                for &(x, y) in &s.samples {
                    writeln!(
                        out,
                        r#"<circle class="data-point" cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                        fmt_px(ax.to_px(x)),
                        fmt_px(y_axis.to_px(y))
                    )
                    .unwrap();
                }
                error_segments(out, ax, &y_axis, s, color);
                if let Some((slope, intercept)) = fits[si] {
                    let (xa, xb) = (s.samples[0].0, s.samples[s.samples.len() - 1].0);
                    writeln!(
                        out,
                        r#"<line class="data-fit" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}"/>"#,
                        fmt_px(ax.to_px(xa)),
                        fmt_px(y_axis.to_px(slope * xa + intercept)),
                        fmt_px(ax.to_px(xb)),
                        fmt_px(y_axis.to_px(slope * xb + intercept))
                    )
                    .unwrap();
                }
            }
        }
        writeln!(out, "</g>").unwrap();
    }

    writeln!(
        out,
        r#"<rect class="plot-frame" x="{}" y="{}" width="{}" height="{}"/>"#,
        fmt_px(PLOT_LEFT),
        fmt_px(PLOT_TOP),
        fmt_px(PLOT_RIGHT - PLOT_LEFT),
        fmt_px(PLOT_BOTTOM - PLOT_TOP)
    )
    .unwrap();

    // Ticks and their labels.
    match &x_coords {
        XCoords::Axis(ax) => {
            for (v, label) in &ax.ticks {
                x_tick(out, ax.to_px(*v), label);
            }
        }
        XCoords::Slots(slots) => {
            for (i, v) in slots.iter().enumerate() {
                x_tick(out, slot_center(slots, i), &fmt_slot(*v));
            }
        }
    }
    for (v, label) in &y_axis.ticks {
        let py = y_axis.to_px(*v);
        writeln!(
            out,
            r#"<line class="tick" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            fmt_px(PLOT_LEFT - 6.0),
            fmt_px(py),
            fmt_px(PLOT_LEFT),
            fmt_px(py)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text class="tick-label" x="{}" y="{}" text-anchor="end">{}</text>"#,
            fmt_px(PLOT_LEFT - 10.0),
            fmt_px(py + 4.0),
            escape_xml(label)
        )
        .unwrap();
    }

    // Axis titles.
    if !spec.x_axis.label.is_empty() {
        writeln!(
            out,
            r#"<text class="axis-label" x="400.00" y="585.00" text-anchor="middle">{}</text>"#,
            escape_xml(&spec.x_axis.label)
        )
        .unwrap();
    }
    if !spec.y_axis.label.is_empty() {
        writeln!(
            out,
            r#"<text class="axis-label" x="15.00" y="300.00" text-anchor="middle" transform="rotate(-90 15 300)">{}</text>"#,
            escape_xml(&spec.y_axis.label)
        )
        .unwrap();
    }

    // Legend: one swatch + label per declared series.
    for (si, s) in series.iter().enumerate() {
        let y = 66.0 + 18.0 * si as f64;
        writeln!(
            out,
            r#"<rect class="legend-swatch" x="622.00" y="{}" width="12" height="12" fill="{}"/>"#,
            fmt_px(y),
            PALETTE[si % PALETTE.len()]
        )
        .unwrap();
        writeln!(
            out,
            r#"<text class="legend-label" x="640.00" y="{}">{}</text>"#,
            fmt_px(y + 10.0),
            escape_xml(&s.label)
        )
        .unwrap();
    }

    writeln!(out, "</svg>").unwrap();
    Ok(svg)
}

/// One vertical segment per point with spread; a tail that would cross a
/// log axis floor clamps to it.
fn error_segments(out: &mut String, ax: &Axis, y_axis: &Axis, s: &SeriesData, color: &str) {
    for p in s.points.iter().filter(|p| p.yerr > 0.0) {
        let px = fmt_px(ax.to_px(p.x));
        writeln!(
            out,
            r#"<line class="data-errbar" x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="{color}"/>"#,
            fmt_px(y_axis.to_px(p.y + p.yerr)),
            fmt_px(y_axis.to_px(p.y - p.yerr))
        )
        .unwrap();
    }
}

fn x_tick(out: &mut String, px: f64, label: &str) {
    let px = fmt_px(px);
    writeln!(
        out,
        r#"<line class="tick" x1="{px}" y1="{}" x2="{px}" y2="{}"/>"#,
        fmt_px(PLOT_BOTTOM),
        fmt_px(PLOT_BOTTOM + 6.0)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text class="tick-label" x="{px}" y="{}" text-anchor="middle">{}</text>"#,
        fmt_px(PLOT_BOTTOM + 20.0),
        escape_xml(label)
    )
    .unwrap();
}

/// Copies the rendered text to every declared output, atomically.
pub fn write_outputs(spec: &PlotSpec, svg: &str) -> Result<(), PlotError> {
    for output in &spec.outputs {
        match output.format {
            OutputFormat::Svg => atomic_write(Path::new(&output.name), svg.as_bytes())?,
        }
    }
    Ok(())
}

/// One-shot bar chart from a results file: reads `input`, extracts
/// (`xfield`, `yfield`) over all records, renders, and writes `output`.
/// Defined as — and byte-identical to — rendering the equivalent
/// single-series bar [`PlotSpec`] with regex `.*` and unit scales.
/// Returns the SVG text.
pub fn quick_bar(
    input: &str,
    xfield: &str,
    yfield: &str,
    title: Option<&str>,
    output: &str,
) -> Result<String, PlotError> {
    let text = std::fs::read_to_string(input).map_err(|e| PlotError::io(input, &e))?;
    let doc = results_model::parse_document(&text)?;
    let spec = PlotSpec {
        title: title.map(str::to_owned),
        plot_type: PlotType::Bar,
        x_axis: AxisSpec::default(),
        y_axis: AxisSpec::default(),
        series: vec![SeriesSpec {
            label: yfield.to_owned(),
            input_file: input.to_owned(),
            regex: ".*".to_owned(),
            xfield: xfield.to_owned(),
            yfield: yfield.to_owned(),
            xscale: 1.0,
            yscale: 1.0,
        }],
        outputs: vec![OutputSpec {
            name: output.to_owned(),
            format: OutputFormat::Svg,
        }],
    };
    let data = build_series(&spec.series[0], &doc)?;
    let svg = render(&spec, &[data])?;
    write_outputs(&spec, &svg)?;
    Ok(svg)
}
