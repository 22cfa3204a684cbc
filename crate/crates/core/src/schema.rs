//! Validated framework trees.
//!
//! A [`FrameworkSchema`] maps each of the six layers to an ordered list of
//! root nodes. Nodes nest to arbitrary depth; leaves carry scores and every
//! internal node is computed from its children.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Violation, Violations};
use crate::ingest::{RawNode, RawSchemaDoc};
use crate::layer::Layer;

pub const DEFAULT_SCALE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaNode {
    id: String,
    title: String,
    children: Vec<SchemaNode>,
}

impl SchemaNode {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn children(&self) -> &[SchemaNode] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn to_raw(&self) -> RawNode {
        RawNode {
            id: self.id.clone(),
            title: self.title.clone(),
            children: self.children.iter().map(SchemaNode::to_raw).collect(),
        }
    }
}

/// Where a node lives: its layer and the child-index path from the layer's
/// root list down to the node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLocation {
    pub layer: Layer,
    pub path: Vec<usize>,
}

impl NodeLocation {
    /// Number of edges from the layer root list; roots have depth 0.
    pub fn depth(&self) -> usize {
        self.path.len() - 1
    }
}

/// A node visited during a pre-order walk of the schema.
#[derive(Debug, Clone, Copy)]
pub struct Visit<'a> {
    pub layer: Layer,
    pub depth: usize,
    pub node: &'a SchemaNode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameworkSchema {
    name: String,
    scale: f64,
    layers: BTreeMap<Layer, Vec<SchemaNode>>,
    index: BTreeMap<String, NodeLocation>,
}

impl FrameworkSchema {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Maximum attainable raw score; also the per-leaf and per-layer ideal.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Root nodes of `layer`, in declaration order.
    pub fn roots(&self, layer: Layer) -> &[SchemaNode] {
        self.layers.get(&layer).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Layers with their roots, in enumeration order.
    pub fn layers(&self) -> impl Iterator<Item = (Layer, &[SchemaNode])> {
        self.layers.iter().map(|(l, roots)| (*l, roots.as_slice()))
    }

    pub fn location(&self, id: &str) -> Option<&NodeLocation> {
        self.index.get(id)
    }

    pub fn node(&self, id: &str) -> Option<&SchemaNode> {
        let loc = self.index.get(id)?;
        let (first, rest) = loc.path.split_first()?;
        let mut node = self.roots(loc.layer).get(*first)?;
        for &i in rest {
            node = node.children.get(i)?;
        }
        Some(node)
    }

    pub fn layer_of(&self, id: &str) -> Option<Layer> {
        self.index.get(id).map(|loc| loc.layer)
    }

    pub fn node_count(&self) -> usize {
        self.index.len()
    }

    /// Pre-order walk over every node, layers in enumeration order.
    pub fn walk(&self) -> Vec<Visit<'_>> {
        fn go<'a>(layer: Layer, depth: usize, node: &'a SchemaNode, out: &mut Vec<Visit<'a>>) {
            out.push(Visit { layer, depth, node });
            for child in &node.children {
                go(layer, depth + 1, child, out);
            }
        }
        let mut out = Vec::with_capacity(self.index.len());
        for (layer, roots) in self.layers() {
            for root in roots {
                go(layer, 0, root, &mut out);
            }
        }
        out
    }

    /// Leaves in pre-order.
    pub fn leaves(&self) -> impl Iterator<Item = &SchemaNode> + '_ {
        self.walk().into_iter().map(|v| v.node).filter(|n| n.is_leaf())
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    pub fn to_raw(&self) -> RawSchemaDoc {
        RawSchemaDoc {
            name: self.name.clone(),
            scale: self.scale,
            layers: self.layers.iter().map(|(l, roots)| (*l, roots.iter().map(SchemaNode::to_raw).collect())).collect(),
        }
    }
}

/// Validates a raw schema document, collecting every violation.
pub fn validate_schema(raw: &RawSchemaDoc) -> Result<FrameworkSchema, Violations> {
    let mut cx = Checker::default();

    if !(raw.scale.is_finite() && raw.scale > 0.0) {
        cx.violations.push(Violation::BadScale { scale: raw.scale });
    }

    let mut layers = BTreeMap::new();
    for layer in Layer::ALL {
        match raw.layers.get(&layer) {
            None => cx.violations.push(Violation::MissingLayer { layer }),
            Some(nodes) if nodes.is_empty() => {
                cx.violations.push(Violation::EmptyNode { layer });
                cx.violations.push(Violation::MissingLayer { layer });
            }
            Some(nodes) => {
                let roots = nodes.iter().enumerate().map(|(i, n)| cx.check(n, None, layer, vec![i])).collect();
                layers.insert(layer, roots);
            }
        }
    }

    Violations::from_vec(cx.violations)?;
    Ok(FrameworkSchema { name: raw.name.clone(), scale: raw.scale, layers, index: cx.index })
}

#[derive(Default)]
struct Checker {
    violations: Vec<Violation>,
    index: BTreeMap<String, NodeLocation>,
    duplicates: HashSet<String>,
}

impl Checker {
    fn check(&mut self, raw: &RawNode, parent: Option<&str>, layer: Layer, path: Vec<usize>) -> SchemaNode {
        let id = raw.id.as_str();
        let well_formed = is_well_formed_id(id);
        if !well_formed {
            self.violations.push(Violation::BadId { id: id.to_owned() });
        }
        if raw.title.trim().is_empty() {
            self.violations.push(Violation::EmptyTitle { id: id.to_owned() });
        }
        if let Some(parent) = parent {
            if well_formed && !has_dotted_prefix(id, parent) {
                self.violations.push(Violation::BadPrefix { parent: parent.to_owned(), child: id.to_owned() });
            }
        }
        if self.index.contains_key(id) {
            // report each duplicated id once
            if self.duplicates.insert(id.to_owned()) {
                self.violations.push(Violation::DuplicateId { id: id.to_owned() });
            }
        } else {
            self.index.insert(id.to_owned(), NodeLocation { layer, path: path.clone() });
        }

        let children = raw
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut child_path = path.clone();
                child_path.push(i);
                self.check(c, Some(id), layer, child_path)
            })
            .collect();

        SchemaNode { id: raw.id.clone(), title: raw.title.clone(), children }
    }
}

fn is_well_formed_id(id: &str) -> bool {
    !id.is_empty() && id.split('.').all(|seg| !seg.is_empty() && !seg.chars().any(char::is_whitespace))
}

fn has_dotted_prefix(child: &str, parent: &str) -> bool {
    child.strip_prefix(parent).and_then(|rest| rest.strip_prefix('.')).is_some_and(|rest| !rest.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(id: &str) -> RawNode {
        RawNode { id: id.into(), title: format!("Node {id}"), children: vec![] }
    }

    fn branch(id: &str, children: Vec<RawNode>) -> RawNode {
        RawNode { id: id.into(), title: format!("Node {id}"), children }
    }

    fn six_layers() -> RawSchemaDoc {
        RawSchemaDoc {
            name: "t".into(),
            scale: 100.0,
            layers: Layer::ALL.into_iter().enumerate().map(|(i, l)| (l, vec![leaf(&(i + 1).to_string())])).collect(),
        }
    }

    #[test]
    fn accepts_minimal_six_layer_schema() {
        let schema = validate_schema(&six_layers()).unwrap();
        assert_eq!(schema.layer_count(), 6);
        assert_eq!(schema.leaf_count(), 6);
        assert_eq!(schema.layer_of("3"), Some(Layer::ToolTechnology));
    }

    #[test]
    fn missing_layer_is_reported() {
        let mut raw = six_layers();
        raw.layers.remove(&Layer::Culture);
        let err = validate_schema(&raw).unwrap_err();
        assert_eq!(err.codes(), ["E_MISSING_LAYER"]);
    }

    #[test]
    fn declared_but_empty_layer_reports_both_codes() {
        let mut raw = six_layers();
        raw.layers.insert(Layer::Culture, vec![]);
        let err = validate_schema(&raw).unwrap_err();
        assert_eq!(err.codes(), ["E_EMPTY_NODE", "E_MISSING_LAYER"]);
    }

    #[test]
    fn duplicate_ids_across_layers() {
        let mut raw = six_layers();
        raw.layers.insert(Layer::Organization, vec![branch("5", vec![leaf("5.1")])]);
        raw.layers.insert(Layer::Policy, vec![branch("6", vec![leaf("5.1")])]);
        let err = validate_schema(&raw).unwrap_err();
        let codes = err.codes();
        assert!(codes.contains(&"E_DUP_ID"));
        assert!(codes.contains(&"E_BAD_PREFIX"));
    }

    #[test]
    fn reports_all_violations_at_once() {
        let mut raw = six_layers();
        raw.scale = 0.0;
        raw.layers.remove(&Layer::Knowledge);
        raw.layers.insert(Layer::Stakeholder, vec![branch("8", vec![leaf("9.1"), leaf("8.1"), leaf("8.1")])]);
        let err = validate_schema(&raw).unwrap_err();
        assert_eq!(err.codes(), ["E_BAD_SCALE", "E_BAD_PREFIX", "E_DUP_ID", "E_MISSING_LAYER"]);
    }

    #[test]
    fn scale_must_be_positive_and_finite() {
        for scale in [-1.0, 0.0, f64::NAN, f64::INFINITY] {
            let mut raw = six_layers();
            raw.scale = scale;
            assert_eq!(validate_schema(&raw).unwrap_err().codes(), ["E_BAD_SCALE"]);
        }
    }

    #[test]
    fn prefix_rule_needs_a_dot_boundary() {
        assert!(has_dotted_prefix("5.1", "5"));
        assert!(has_dotted_prefix("5.1.2", "5.1"));
        assert!(has_dotted_prefix("5.1.2", "5"));
        assert!(!has_dotted_prefix("51", "5"));
        assert!(!has_dotted_prefix("5.", "5"));
        assert!(!has_dotted_prefix("5", "5"));
    }

    #[test]
    fn malformed_ids_and_titles() {
        let mut raw = six_layers();
        raw.layers
            .insert(Layer::Organization, vec![RawNode { id: "5..1".into(), title: " ".into(), children: vec![] }]);
        assert_eq!(validate_schema(&raw).unwrap_err().codes(), ["E_BAD_ID", "E_EMPTY_TITLE"]);
    }

    #[test]
    fn node_lookup_follows_paths() {
        let mut raw = six_layers();
        raw.layers
            .insert(Layer::Organization, vec![branch("20", vec![leaf("20.1"), branch("20.2", vec![leaf("20.2.1")])])]);
        let schema = validate_schema(&raw).unwrap();
        let node = schema.node("20.2.1").unwrap();
        assert!(node.is_leaf());
        assert_eq!(schema.location("20.2.1").unwrap().path, [0, 1, 0]);
        assert_eq!(schema.location("20.2.1").unwrap().depth(), 2);
        assert!(!schema.node("20.2").unwrap().is_leaf());
        assert!(schema.node("7.7").is_none());
        let leaves: Vec<_> = schema.leaves().map(|n| n.id().to_owned()).collect();
        assert_eq!(leaves[..2], ["20.1", "20.2.1"]);
    }

    #[test]
    fn validation_is_deterministic() {
        let mut raw = six_layers();
        raw.scale = -3.0;
        raw.layers.insert(Layer::Policy, vec![branch("4", vec![leaf("x")])]);
        assert_eq!(validate_schema(&raw), validate_schema(&raw));
    }

    #[test]
    fn to_raw_revalidates_identically() {
        let schema = validate_schema(&six_layers()).unwrap();
        assert_eq!(validate_schema(&schema.to_raw()).unwrap(), schema);
    }
}
