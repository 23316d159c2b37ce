//! CSV, JSON and SVG renderings of traces.
//!
//! All numbers go through [`number`], 17 significant digits in scientific
//! notation, so CSV and JSON carry bit-identical values.

use std::io::{self, Write};

use levelpath::{LevelPoint, Method, Orientation, TraceResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

/// A trace together with what produced it.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    /// Position of the seed in the request.
    pub index: usize,
    pub function: String,
    pub seed: String,
    pub method: Method,
    pub orientation: Orientation,
    pub result: TraceResult,
}

/// Round-trip decimal rendering of a binary64 value.
pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

pub const CSV_HEADER: &str = "trace_index,s,re,im,abs_f,drift";

pub fn write_csv<W: Write + ?Sized>(out: &mut W, records: &[TraceRecord]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for rec in records {
        for p in &rec.result.points {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                rec.index,
                number(p.s),
                number(p.z.re),
                number(p.z.im),
                number(p.modulus),
                number(p.drift)
            )?;
        }
    }
    Ok(())
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_point(p: &LevelPoint) -> String {
    format!(
        "{{\"s\":{},\"re\":{},\"im\":{},\"abs_f\":{},\"drift\":{}}}",
        number(p.s),
        number(p.z.re),
        number(p.z.im),
        number(p.modulus),
        number(p.drift)
    )
}

fn write_json_record<W: Write + ?Sized>(
    out: &mut W,
    rec: &TraceRecord,
    with_index: bool,
) -> io::Result<()> {
    write!(out, "{{")?;
    if with_index {
        write!(out, "\"trace_index\":{},", rec.index)?;
    }
    write!(
        out,
        "\"function\":{},\"seed\":{},\"c\":{},\"method\":{},\"orientation\":{},\"termination\":{},\"points\":[",
        json_string(&rec.function),
        json_string(&rec.seed),
        number(rec.result.level),
        json_string(rec.method.name()),
        rec.orientation.sign() as i32,
        json_string(rec.result.termination.name()),
    )?;
    for (k, p) in rec.result.points.iter().enumerate() {
        if k > 0 {
            write!(out, ",")?;
        }
        write!(out, "{}", json_point(p))?;
    }
    write!(out, "]}}")
}

/// A single trace as one JSON object.
pub fn write_json<W: Write + ?Sized>(out: &mut W, rec: &TraceRecord) -> io::Result<()> {
    write_json_record(out, rec, false)?;
    writeln!(out)
}

/// Several traces as a JSON array of objects carrying `trace_index`.
pub fn write_json_array<W: Write + ?Sized>(out: &mut W, records: &[TraceRecord]) -> io::Result<()> {
    write!(out, "[")?;
    for (k, rec) in records.iter().enumerate() {
        if k > 0 {
            writeln!(out, ",")?;
        }
        write_json_record(out, rec, true)?;
    }
    writeln!(out, "]")
}

pub const SVG_SIZE: f64 = 800.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// The square data window `(x_min, y_max, side)` mapped onto the viewport.
///
/// The bounding box of all points is expanded by 5% of its extent on every
/// side, then its shorter dimension is widened about its centre so that both
/// axes share one scale.
pub fn svg_window(records: &[TraceRecord]) -> (f64, f64, f64) {
    let mut points = records.iter().flat_map(|r| r.result.points.iter());
    let Some(first) = points.next() else {
        return (-1.0, 1.0, 2.0);
    };
    let (mut x0, mut x1, mut y0, mut y1) = (first.z.re, first.z.re, first.z.im, first.z.im);
    for p in points {
        x0 = x0.min(p.z.re);
        x1 = x1.max(p.z.re);
        y0 = y0.min(p.z.im);
        y1 = y1.max(p.z.im);
    }
    let (w, h) = (x1 - x0, y1 - y0);
    // 5% growth overall, split evenly between both sides
    let (x0, x1, y0, y1) = (
        x0 - 0.025 * w,
        x1 + 0.025 * w,
        y0 - 0.025 * h,
        y1 + 0.025 * h,
    );
    let mut side = (x1 - x0).max(y1 - y0);
    if !(side > 0.0) {
        side = 1.0;
    }
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    (cx - 0.5 * side, cy + 0.5 * side, side)
}

pub fn write_svg<W: Write + ?Sized>(out: &mut W, records: &[TraceRecord]) -> io::Result<()> {
    let (x_min, y_max, side) = svg_window(records);
    let scale = SVG_SIZE / side;
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">"
    )?;
    for rec in records {
        let coords: Vec<String> = rec
            .result
            .points
            .iter()
            .map(|p| {
                format!(
                    "{:.4},{:.4}",
                    (p.z.re - x_min) * scale,
                    (y_max - p.z.im) * scale
                )
            })
            .collect();
        writeln!(
            out,
            "<polyline data-trace-index=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>",
            rec.index,
            PALETTE[rec.index % PALETTE.len()],
            coords.join(" ")
        )?;
    }
    writeln!(out, "</svg>")
}

pub fn write_records<W: Write + ?Sized>(
    out: &mut W,
    format: OutputFormat,
    records: &[TraceRecord],
    sweep: bool,
) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(out, records),
        OutputFormat::Json if sweep => write_json_array(out, records),
        OutputFormat::Json => match records.first() {
            Some(rec) => write_json(out, rec),
            None => writeln!(out, "null"),
        },
        OutputFormat::Svg => write_svg(out, records),
    }
}
