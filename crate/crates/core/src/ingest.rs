//! Schema and score documents: parsing, shape checks and export.
//!
//! Schema documents are JSON:
//!
//! ```json
//! {"name": "...", "scale": 100.0,
//!  "layers": {"organization": [{"id": "5", "title": "...", "children": []}], ...}}
//! ```
//!
//! Score documents are either CSV with a `node_id,score` header or JSON of
//! the form `{"name": "...", "scores": {"5": 54.5, ...}}`. Semantic checks
//! (layer coverage, id rules, ranges) happen later in [`crate::schema`] and
//! [`crate::assessment`]; this module only checks syntax and shape.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::layer::Layer;
use crate::schema::FrameworkSchema;

/// Unvalidated node as it appears in a schema document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawNode {
    pub id: String,
    pub title: String,
    pub children: Vec<RawNode>,
}

/// Unvalidated schema document. Field order here is the export key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawSchemaDoc {
    pub name: String,
    pub scale: f64,
    pub layers: BTreeMap<Layer, Vec<RawNode>>,
}

/// Parsed score document: `(node_id, score)` pairs in document order,
/// with no repeated `node_id`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawScoresDoc {
    name: String,
    pairs: Vec<(String, f64)>,
}

impl RawScoresDoc {
    pub fn new(name: impl Into<String>, pairs: Vec<(String, f64)>) -> Result<Self, IngestError> {
        let mut seen = HashSet::with_capacity(pairs.len());
        for (id, _) in &pairs {
            if !seen.insert(id.as_str()) {
                return Err(IngestError::DupKey { id: id.clone() });
            }
        }
        Ok(RawScoresDoc { name: name.into(), pairs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pairs(&self) -> &[(String, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Pairs ordered by node id, for order-insensitive comparison.
    pub fn sorted_pairs(&self) -> Vec<(String, f64)> {
        let mut pairs = self.pairs.clone();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoresFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("E_PARSE line {line}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse { line: u64, column: Option<u64>, message: String },
    #[error("E_SHAPE {field}: expected {expected}")]
    Shape { field: String, expected: String },
    #[error("E_DUP_KEY {id}: node id listed more than once")]
    DupKey { id: String },
    #[error("E_NAN {}{id}: `{value}` is not a plain decimal number", row.map(|r| format!("row {r}, id ")).unwrap_or_default())]
    Nan { row: Option<u64>, id: String, value: String },
}

impl IngestError {
    pub fn code(&self) -> &'static str {
        match self {
            IngestError::Parse { .. } => "E_PARSE",
            IngestError::Shape { .. } => "E_SHAPE",
            IngestError::DupKey { .. } => "E_DUP_KEY",
            IngestError::Nan { .. } => "E_NAN",
        }
    }
}

fn shape(field: impl Into<String>, expected: &str) -> IngestError {
    IngestError::Shape { field: field.into(), expected: expected.to_owned() }
}

fn json_syntax(err: serde_json::Error) -> IngestError {
    IngestError::Parse { line: err.line() as u64, column: Some(err.column() as u64), message: err.to_string() }
}

// ---------------------------------------------------------------------------
// Schema documents
// ---------------------------------------------------------------------------

pub fn parse_schema(text: &str) -> Result<RawSchemaDoc, IngestError> {
    let value: Value = serde_json::from_str(text).map_err(json_syntax)?;
    let top = value.as_object().ok_or_else(|| shape("$", "a JSON object"))?;

    let name = str_field(top, "name", "name")?;
    let scale = top
        .get("scale")
        .ok_or_else(|| shape("scale", "a number"))?
        .as_f64()
        .ok_or_else(|| shape("scale", "a number"))?;
    let layer_map =
        top.get("layers").and_then(Value::as_object).ok_or_else(|| shape("layers", "an object keyed by layer name"))?;

    let mut layers = BTreeMap::new();
    for (key, nodes) in layer_map {
        let path = format!("layers.{key}");
        let layer: Layer = key.parse().map_err(|_| {
            shape(&path, "one of organization, stakeholder, tool_technology, policy, culture, knowledge")
        })?;
        layers.insert(layer, node_list(nodes, &path)?);
    }

    Ok(RawSchemaDoc { name, scale, layers })
}

fn str_field(obj: &Map<String, Value>, key: &str, path: &str) -> Result<String, IngestError> {
    obj.get(key).and_then(Value::as_str).map(str::to_owned).ok_or_else(|| shape(path, "a string"))
}

fn node_list(value: &Value, path: &str) -> Result<Vec<RawNode>, IngestError> {
    let items = value.as_array().ok_or_else(|| shape(path, "an array of nodes"))?;
    items.iter().enumerate().map(|(i, item)| raw_node(item, &format!("{path}[{i}]"))).collect()
}

fn raw_node(value: &Value, path: &str) -> Result<RawNode, IngestError> {
    let obj = value.as_object().ok_or_else(|| shape(path, "a node object"))?;
    let id = str_field(obj, "id", &format!("{path}.id"))?;
    let title = str_field(obj, "title", &format!("{path}.title"))?;
    let children_path = format!("{path}.children");
    let children =
        node_list(obj.get("children").ok_or_else(|| shape(&children_path, "an array of nodes"))?, &children_path)?;
    Ok(RawNode { id, title, children })
}

/// Serializes a validated schema. Keys are emitted as `name`, `scale`,
/// `layers`; layers in enumeration order; nodes as `id`, `title`,
/// `children`. Output ends with a newline and is byte-stable.
pub fn export_schema(schema: &FrameworkSchema) -> String {
    let mut text = serde_json::to_string_pretty(&schema.to_raw()).expect("schema serializes");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// Score documents
// ---------------------------------------------------------------------------

pub fn parse_scores(text: &str, format: ScoresFormat) -> Result<RawScoresDoc, IngestError> {
    match format {
        ScoresFormat::Csv => parse_scores_csv(text),
        ScoresFormat::Json => parse_scores_json(text),
    }
}

fn parse_scores_csv(text: &str) -> Result<RawScoresDoc, IngestError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());

    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.len() != 2 || &headers[0] != "node_id" || &headers[1] != "score" {
        return Err(shape("header", "`node_id,score`"));
    }

    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let row = record.position().map(|p| p.line()).unwrap_or_default();
        let id = record[0].to_owned();
        if id.is_empty() {
            return Err(shape(format!("row {row}.node_id"), "a non-empty node id"));
        }
        let raw = &record[1];
        let score = parse_plain_decimal(raw).ok_or_else(|| IngestError::Nan {
            row: Some(row),
            id: id.clone(),
            value: raw.to_owned(),
        })?;
        if !seen.insert(id.clone()) {
            return Err(IngestError::DupKey { id });
        }
        pairs.push((id, score));
    }
    Ok(RawScoresDoc { name: String::new(), pairs })
}

fn csv_error(err: csv::Error) -> IngestError {
    let line = err.position().map(|p| p.line()).unwrap_or_default();
    IngestError::Parse { line, column: None, message: err.to_string() }
}

/// Accepts `[+-]digits[.digits]` (either side of the point may be empty,
/// not both). Exponents, `inf`, `NaN` and locale separators are rejected.
pub fn parse_plain_decimal(s: &str) -> Option<f64> {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |part: &str| part.bytes().all(|b| b.is_ascii_digit());
    if (int.is_empty() && frac.is_empty()) || !digits(int) || !digits(frac) {
        return None;
    }
    s.parse().ok()
}

fn parse_scores_json(text: &str) -> Result<RawScoresDoc, IngestError> {
    let value: Value = serde_json::from_str(text).map_err(json_syntax)?;
    let top = value.as_object().ok_or_else(|| shape("$", "a JSON object"))?;
    let name = str_field(top, "name", "name")?;
    if !top.get("scores").is_some_and(Value::is_object) {
        return Err(shape("scores", "an object mapping node id to number"));
    }

    // `Value` collapses repeated keys, so re-read the entries in order.
    #[derive(Deserialize)]
    struct Wire {
        scores: OrderedEntries,
    }
    let wire: Wire = serde_json::from_str(text).map_err(|e| shape("scores", &e.to_string()))?;

    let mut pairs = Vec::with_capacity(wire.scores.0.len());
    let mut seen = HashSet::new();
    for (id, v) in wire.scores.0 {
        let score = v.as_f64().ok_or_else(|| IngestError::Nan { row: None, id: id.clone(), value: v.to_string() })?;
        if !seen.insert(id.clone()) {
            return Err(IngestError::DupKey { id });
        }
        pairs.push((id, score));
    }
    Ok(RawScoresDoc { name, pairs })
}

struct OrderedEntries(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for OrderedEntries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = OrderedEntries;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping node id to score")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<OrderedEntries, A::Error> {
                let mut entries = Vec::new();
                while let Some(entry) = map.next_entry::<String, Value>()? {
                    entries.push(entry);
                }
                Ok(OrderedEntries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

/// Serializes scores in document order. Numbers use the shortest
/// representation that parses back to the same `f64`.
pub fn export_scores(doc: &RawScoresDoc, format: ScoresFormat) -> String {
    match format {
        ScoresFormat::Csv => {
            let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
            writer.write_record(["node_id", "score"]).expect("in-memory write");
            for (id, score) in &doc.pairs {
                writer.write_record([id.as_str(), &score.to_string()]).expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
        ScoresFormat::Json => {
            struct Ordered<'a>(&'a [(String, f64)]);
            impl Serialize for Ordered<'_> {
                fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                    let mut map = s.serialize_map(Some(self.0.len()))?;
                    for (id, score) in self.0 {
                        map.serialize_entry(id, score)?;
                    }
                    map.end()
                }
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                name: &'a str,
                scores: Ordered<'a>,
            }
            let mut text = serde_json::to_string_pretty(&Doc { name: &doc.name, scores: Ordered(&doc.pairs) })
                .expect("scores serialize");
            text.push('\n');
            text
        }
    }
}
