//! Human tables, machine documents and chart data.
//!
//! Rounding happens here and nowhere else. Machine formats (JSON, CSV)
//! carry the exact engine values next to the rounded display strings.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{EvaluationResult, GapReport};
use crate::layer::Layer;
use crate::schema::FrameworkSchema;

pub const MAX_PRECISION: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected table, json or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Table => "table",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("precision {0} exceeds the maximum of {MAX_PRECISION} decimal places")]
pub struct PrecisionTooLarge(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    format: Format,
    precision: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { format: Format::Table, precision: 1 }
    }
}

impl RenderOptions {
    pub fn new(format: Format, precision: usize) -> Result<Self, PrecisionTooLarge> {
        if precision > MAX_PRECISION {
            return Err(PrecisionTooLarge(precision));
        }
        Ok(RenderOptions { format, precision })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn round(&self, value: f64) -> String {
        round_half_up(value, self.precision)
    }
}

/// Formats `value` with `precision` decimals, rounding half away from zero.
///
/// The decision is made on the shortest decimal representation that
/// round-trips to `value`, so `57.25` becomes `57.3` at one decimal even
/// though `format!("{:.1}", 57.25)` gives `57.2`.
pub fn round_half_up(value: f64, precision: usize) -> String {
    if !value.is_finite() {
        return value.to_string();
    }
    // f64's Display never uses exponent notation.
    let repr = value.abs().to_string();
    let (int_part, frac_part) = repr.split_once('.').unwrap_or((&repr, ""));

    let mut digits: Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes().chain(std::iter::repeat(b'0')).take(precision))
        .map(|b| b - b'0')
        .collect();
    if frac_part.as_bytes().get(precision).is_some_and(|&d| d >= b'5') {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }

    let int_len = digits.len() - precision;
    let mut out = String::with_capacity(digits.len() + 2);
    if value.is_sign_negative() && digits.iter().any(|&d| d != 0) {
        out.push('-');
    }
    out.extend(digits[..int_len].iter().map(|d| char::from(b'0' + d)));
    if precision > 0 {
        out.push('.');
        out.extend(digits[int_len..].iter().map(|d| char::from(b'0' + d)));
    }
    out
}

fn exact(value: f64) -> String {
    value.to_string()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Fixed-width text table; trailing blanks are trimmed from each line.
/// `None` rows become horizontal rules.
fn to_table(header: &[&str], rows: &[Option<Vec<String>>]) -> String {
    let width = |s: &str| s.chars().count();
    let mut widths: Vec<usize> = header.iter().map(|h| width(h)).collect();
    for row in rows.iter().flatten() {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(width(cell));
        }
    }
    let line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut text = String::new();
        for (i, (cell, w)) in cells.zip(&widths).enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            text.push_str(cell);
            text.extend(std::iter::repeat_n(' ', w - width(cell)));
        }
        let mut text = text.trim_end().to_owned();
        text.push('\n');
        text
    };
    let rule = {
        let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        let mut r = "-".repeat(total);
        r.push('\n');
        r
    };

    let mut out = line(&mut header.iter().copied());
    out.push_str(&rule);
    for row in rows {
        match row {
            Some(cells) => out.push_str(&line(&mut cells.iter().map(String::as_str))),
            None => out.push_str(&rule),
        }
    }
    out
}

#[derive(Serialize)]
struct ResultDoc<'a> {
    schema: &'a str,
    scale: f64,
    precision: usize,
    overall: Valued,
    layers: Vec<LayerDoc>,
    nodes: Vec<NodeDoc<'a>>,
}

#[derive(Serialize)]
struct Valued {
    value: f64,
    display: String,
}

#[derive(Serialize)]
struct LayerDoc {
    layer: Layer,
    value: f64,
    display: String,
    ideal: f64,
    priority: f64,
    priority_display: String,
}

#[derive(Serialize)]
struct NodeDoc<'a> {
    id: &'a str,
    title: &'a str,
    layer: Layer,
    depth: usize,
    is_leaf: bool,
    value: f64,
    display: String,
}

/// Renders an evaluation.
///
/// The table groups nodes under their layer in schema order (nested nodes
/// indented under their parent), shows each layer's score on its first row
/// and ends with an `Overall Score` row. JSON and CSV list the same nodes
/// in the same order with exact and display values.
pub fn render_result(result: &EvaluationResult, schema: &FrameworkSchema, opts: &RenderOptions) -> String {
    let node_value = |id: &str| result.node(id).map(|n| n.value).expect("result covers every schema node");
    let layer_value = |l: Layer| result.layer(l).map(|v| v.value).expect("result covers every layer");
    let visits = schema.walk();

    match opts.format {
        Format::Table => {
            let mut rows = Vec::with_capacity(visits.len() + 2);
            let mut current = None;
            for v in &visits {
                let first_in_layer = current != Some(v.layer);
                current = Some(v.layer);
                rows.push(Some(vec![
                    if first_in_layer { v.layer.label().to_owned() } else { String::new() },
                    format!("{}{}", "  ".repeat(v.depth), v.node.title()),
                    v.node.id().to_owned(),
                    opts.round(node_value(v.node.id())),
                    if first_in_layer { opts.round(layer_value(v.layer)) } else { String::new() },
                ]));
            }
            rows.push(None);
            rows.push(Some(vec![
                "Overall Score".to_owned(),
                String::new(),
                String::new(),
                opts.round(result.overall()),
                String::new(),
            ]));
            to_table(&["Six Layer on Framework", "Title", "Control Number", "Assessment Result", "Layer Score"], &rows)
        }
        Format::Json => to_json(&ResultDoc {
            schema: schema.name(),
            scale: result.scale(),
            precision: opts.precision,
            overall: Valued { value: result.overall(), display: opts.round(result.overall()) },
            layers: result
                .layers()
                .map(|l| LayerDoc {
                    layer: l.layer,
                    value: l.value,
                    display: opts.round(l.value),
                    ideal: l.ideal,
                    priority: l.priority,
                    priority_display: opts.round(l.priority),
                })
                .collect(),
            nodes: visits
                .iter()
                .map(|v| {
                    let value = node_value(v.node.id());
                    NodeDoc {
                        id: v.node.id(),
                        title: v.node.title(),
                        layer: v.layer,
                        depth: v.depth,
                        is_leaf: v.node.is_leaf(),
                        value,
                        display: opts.round(value),
                    }
                })
                .collect(),
        }),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = visits
                .iter()
                .map(|v| {
                    let value = node_value(v.node.id());
                    vec![
                        "node".to_owned(),
                        v.layer.name().to_owned(),
                        v.node.id().to_owned(),
                        v.node.title().to_owned(),
                        exact(value),
                        opts.round(value),
                    ]
                })
                .collect();
            rows.extend(result.layers().map(|l| {
                vec![
                    "layer".to_owned(),
                    l.layer.name().to_owned(),
                    String::new(),
                    l.layer.label().to_owned(),
                    exact(l.value),
                    opts.round(l.value),
                ]
            }));
            rows.push(vec![
                "overall".to_owned(),
                String::new(),
                String::new(),
                "Overall Score".to_owned(),
                exact(result.overall()),
                opts.round(result.overall()),
            ]);
            to_csv(&["kind", "layer", "id", "title", "value", "display"], &rows)
        }
    }
}

#[derive(Serialize)]
struct ChartDoc {
    scale: f64,
    precision: usize,
    rows: Vec<ChartRow>,
}

#[derive(Serialize)]
struct ChartRow {
    layer: Layer,
    ideal: f64,
    achievement: f64,
    priority: f64,
    display: ChartDisplay,
}

#[derive(Serialize)]
struct ChartDisplay {
    ideal: String,
    achievement: String,
    priority: String,
}

/// Per-layer ideal/achievement/priority rows, highest priority first: the
/// data behind a grouped bar chart.
///
/// CSV has the header `layer,ideal,achievement,priority` and carries exact
/// values; the table rounds at the configured precision.
pub fn render_chart_data(gaps: &GapReport, opts: &RenderOptions) -> String {
    match opts.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = gaps
                .ranked()
                .map(|g| vec![g.layer.name().to_owned(), exact(g.ideal), exact(g.achievement), exact(g.priority)])
                .collect();
            to_csv(&["layer", "ideal", "achievement", "priority"], &rows)
        }
        Format::Json => to_json(&ChartDoc {
            scale: gaps.scale(),
            precision: opts.precision,
            rows: gaps
                .ranked()
                .map(|g| ChartRow {
                    layer: g.layer,
                    ideal: g.ideal,
                    achievement: g.achievement,
                    priority: g.priority,
                    display: ChartDisplay {
                        ideal: opts.round(g.ideal),
                        achievement: opts.round(g.achievement),
                        priority: opts.round(g.priority),
                    },
                })
                .collect(),
        }),
        Format::Table => {
            let rows: Vec<Option<Vec<String>>> = gaps
                .ranked()
                .map(|g| {
                    Some(vec![
                        g.layer.label().to_owned(),
                        opts.round(g.ideal),
                        opts.round(g.achievement),
                        opts.round(g.priority),
                    ])
                })
                .collect();
            to_table(&["Layer", "Ideal", "Achievement", "Priority"], &rows)
        }
    }
}

#[derive(Serialize)]
struct SensitivityRow<'a> {
    id: &'a str,
    layer: Layer,
    title: &'a str,
    sensitivity: f64,
}

/// Per-leaf sensitivities. Values are printed exactly in every format;
/// precision does not apply.
pub fn render_sensitivities(schema: &FrameworkSchema, rows: &[(String, f64)], opts: &RenderOptions) -> String {
    let resolved: Vec<SensitivityRow> = rows
        .iter()
        .map(|(id, s)| SensitivityRow {
            id,
            layer: schema.layer_of(id).expect("sensitivity ids come from the schema"),
            title: schema.node(id).map(|n| n.title()).unwrap_or_default(),
            sensitivity: *s,
        })
        .collect();
    match opts.format {
        Format::Json => to_json(&resolved),
        Format::Csv => to_csv(
            &["id", "layer", "title", "sensitivity"],
            &resolved
                .iter()
                .map(|r| vec![r.id.to_owned(), r.layer.name().to_owned(), r.title.to_owned(), exact(r.sensitivity)])
                .collect::<Vec<_>>(),
        ),
        Format::Table => to_table(
            &["Id", "Layer", "Title", "Sensitivity"],
            &resolved
                .iter()
                .map(|r| {
                    Some(vec![r.id.to_owned(), r.layer.label().to_owned(), r.title.to_owned(), exact(r.sensitivity)])
                })
                .collect::<Vec<_>>(),
        ),
    }
}
