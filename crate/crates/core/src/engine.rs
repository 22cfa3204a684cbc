//! Recursive mean aggregation.
//!
//! Leaf value = raw score; internal node = mean of its children; layer =
//! mean of its root nodes; overall = mean of the layer values. Every
//! intermediate value is kept unrounded.

use std::collections::BTreeMap;

use crate::assessment::Assessment;
use crate::error::{UnknownReason, Violation};
use crate::layer::Layer;
use crate::schema::{FrameworkSchema, SchemaNode};

#[derive(Debug, Clone, PartialEq)]
pub struct NodeValue {
    pub id: String,
    pub value: f64,
    pub is_leaf: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerValue {
    pub layer: Layer,
    pub value: f64,
    /// Same as `value`.
    pub achievement: f64,
    /// The schema scale.
    pub ideal: f64,
    /// `ideal - achievement`.
    pub priority: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    scale: f64,
    per_node: BTreeMap<String, NodeValue>,
    per_layer: BTreeMap<Layer, LayerValue>,
    overall: f64,
}

impl EvaluationResult {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn overall(&self) -> f64 {
        self.overall
    }

    pub fn node(&self, id: &str) -> Option<&NodeValue> {
        self.per_node.get(id)
    }

    /// Node values ordered by id.
    pub fn nodes(&self) -> impl Iterator<Item = &NodeValue> {
        self.per_node.values()
    }

    pub fn layer(&self, layer: Layer) -> Option<&LayerValue> {
        self.per_layer.get(&layer)
    }

    /// Layer values in enumeration order.
    pub fn layers(&self) -> impl Iterator<Item = &LayerValue> {
        self.per_layer.values()
    }
}

fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Evaluates every node, layer and the overall score.
///
/// # Panics
///
/// If `assessment` was not bound to `schema` and a leaf has no score.
pub fn evaluate(schema: &FrameworkSchema, assessment: &Assessment) -> EvaluationResult {
    fn visit(node: &SchemaNode, assessment: &Assessment, out: &mut BTreeMap<String, NodeValue>) -> f64 {
        let value = if node.is_leaf() {
            assessment.score(node.id()).unwrap_or_else(|| panic!("assessment has no score for leaf {}", node.id()))
        } else {
            let children: Vec<f64> = node.children().iter().map(|c| visit(c, assessment, out)).collect();
            mean(children)
        };
        out.insert(node.id().to_owned(), NodeValue { id: node.id().to_owned(), value, is_leaf: node.is_leaf() });
        value
    }

    let scale = schema.scale();
    let mut per_node = BTreeMap::new();
    let mut per_layer = BTreeMap::new();
    for (layer, roots) in schema.layers() {
        let roots: Vec<f64> = roots.iter().map(|r| visit(r, assessment, &mut per_node)).collect();
        let value = mean(roots);
        per_layer.insert(layer, LayerValue { layer, value, achievement: value, ideal: scale, priority: scale - value });
    }
    let overall = mean(per_layer.values().map(|l| l.value));

    EvaluationResult { scale, per_node, per_layer, overall }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerGap {
    pub layer: Layer,
    pub ideal: f64,
    pub achievement: f64,
    pub priority: f64,
}

/// Per-layer gaps plus the remediation order.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    scale: f64,
    gaps: Vec<LayerGap>,
    ranking: Vec<Layer>,
}

impl GapReport {
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Gaps in layer enumeration order.
    pub fn gaps(&self) -> &[LayerGap] {
        &self.gaps
    }

    pub fn gap(&self, layer: Layer) -> Option<&LayerGap> {
        self.gaps.iter().find(|g| g.layer == layer)
    }

    /// Layers by priority, highest first.
    pub fn ranking(&self) -> &[Layer] {
        &self.ranking
    }

    /// Gaps in ranking order.
    pub fn ranked(&self) -> impl Iterator<Item = &LayerGap> {
        self.ranking.iter().filter_map(|l| self.gap(*l))
    }
}

/// Ranks layers by priority descending; equal priorities keep enumeration
/// order.
pub fn gap_report(result: &EvaluationResult) -> GapReport {
    let gaps: Vec<LayerGap> = result
        .layers()
        .map(|l| LayerGap { layer: l.layer, ideal: l.ideal, achievement: l.achievement, priority: l.priority })
        .collect();
    let mut ranked = gaps.clone();
    // stable sort keeps enumeration order among ties
    ranked.sort_by(|a, b| b.priority.total_cmp(&a.priority));
    GapReport { scale: result.scale, ranking: ranked.iter().map(|g| g.layer).collect(), gaps }
}

/// Exact partial derivative of the overall score with respect to one leaf
/// score: the product of `1/fan-out` over every mean on the leaf's path,
/// including the layer root mean and the mean over layers.
pub fn sensitivity(schema: &FrameworkSchema, leaf_id: &str) -> Result<f64, Violation> {
    let loc = schema
        .location(leaf_id)
        .ok_or_else(|| Violation::UnknownNode { id: leaf_id.to_owned(), reason: UnknownReason::NotInSchema })?;
    let roots = schema.roots(loc.layer);
    let (first, rest) = loc.path.split_first().expect("locations are non-empty");

    let mut weight = 1.0 / schema.layer_count() as f64 / roots.len() as f64;
    let mut node = &roots[*first];
    for &i in rest {
        weight /= node.children().len() as f64;
        node = &node.children()[i];
    }
    if !node.is_leaf() {
        return Err(Violation::NotLeaf { id: leaf_id.to_owned() });
    }
    Ok(weight)
}

/// Sensitivity of every leaf, in schema pre-order.
pub fn sensitivities(schema: &FrameworkSchema) -> Vec<(String, f64)> {
    schema
        .leaves()
        .map(|leaf| {
            let s = sensitivity(schema, leaf.id()).expect("leaf ids resolve");
            (leaf.id().to_owned(), s)
        })
        .collect()
}
