//! Test support: random framework schemas and a deliberately naive
//! reference evaluator that works on raw documents, independent of
//! `isol_core::engine`.

use std::collections::{BTreeMap, HashMap};

use isol_core::{Layer, RawNode, RawSchemaDoc, RawScoresDoc};
use proptest::prelude::*;

pub mod props;

pub const SCALE: f64 = 100.0;

/// Tree shape without ids: a node is the list of its children.
#[derive(Debug, Clone)]
pub struct Shape(pub Vec<Shape>);

/// Shapes at most `max_depth` levels deep with 1..=`max_branch` children
/// per internal node.
pub fn arb_shape(max_depth: u32, max_branch: usize) -> impl Strategy<Value = Shape> {
    Just(Shape(Vec::new())).prop_recursive(max_depth.saturating_sub(1), 48, max_branch as u32, move |inner| {
        prop::collection::vec(inner, 1..=max_branch).prop_map(Shape)
    })
}

fn build(shape: &Shape, id: String) -> RawNode {
    RawNode {
        title: format!("Node {id}"),
        children: shape.0.iter().enumerate().map(|(i, s)| build(s, format!("{id}.{}", i + 1))).collect(),
        id,
    }
}

/// Six-layer schemas, depth <= 5, branching 1..=6 (root lists included).
pub fn arb_schema() -> impl Strategy<Value = RawSchemaDoc> {
    prop::collection::vec(prop::collection::vec(arb_shape(5, 6), 1..=6), Layer::COUNT).prop_map(|layers| {
        let mut next_root = 0;
        let mut doc = RawSchemaDoc { name: "random".into(), scale: SCALE, layers: BTreeMap::new() };
        for (layer, roots) in Layer::ALL.into_iter().zip(layers) {
            let nodes = roots
                .iter()
                .map(|shape| {
                    next_root += 1;
                    build(shape, next_root.to_string())
                })
                .collect();
            doc.layers.insert(layer, nodes);
        }
        doc
    })
}

/// Leaf ids in pre-order, layers in enumeration order.
pub fn leaf_ids(doc: &RawSchemaDoc) -> Vec<String> {
    fn go(node: &RawNode, out: &mut Vec<String>) {
        if node.children.is_empty() {
            out.push(node.id.clone());
        }
        for c in &node.children {
            go(c, out);
        }
    }
    let mut out = Vec::new();
    for roots in doc.layers.values() {
        for r in roots {
            go(r, &mut out);
        }
    }
    out
}

/// A schema with a uniform random score in `[0, SCALE]` for every leaf.
pub fn arb_scored_schema() -> impl Strategy<Value = (RawSchemaDoc, Vec<(String, f64)>)> {
    arb_schema().prop_flat_map(|doc| {
        let ids = leaf_ids(&doc);
        let n = ids.len();
        (Just(doc), Just(ids), prop::collection::vec(0.0..=SCALE, n))
            .prop_map(|(doc, ids, scores)| (doc, ids.into_iter().zip(scores).collect()))
    })
}

pub fn scores_doc(pairs: &[(String, f64)]) -> RawScoresDoc {
    RawScoresDoc::new("random", pairs.to_vec()).expect("generated ids are unique")
}

/// Reorders every child list (layer roots included) by the given sort keys,
/// cycling through `keys`. Ids, titles and nesting are untouched.
pub fn permute_children(doc: &RawSchemaDoc, keys: &[u64]) -> RawSchemaDoc {
    fn shuffle(nodes: &mut [RawNode], keys: &[u64], cursor: &mut usize) {
        let mut keyed: Vec<(u64, usize)> = (0..nodes.len())
            .map(|i| {
                *cursor += 1;
                (keys[*cursor % keys.len()], i)
            })
            .collect();
        keyed.sort();
        let original = nodes.to_vec();
        for (slot, (_, from)) in nodes.iter_mut().zip(keyed) {
            *slot = original[from].clone();
        }
        for n in nodes.iter_mut() {
            shuffle(&mut n.children, keys, cursor);
        }
    }
    let mut out = doc.clone();
    let mut cursor = 0;
    for roots in out.layers.values_mut() {
        shuffle(roots, keys, &mut cursor);
    }
    out
}

/// Values computed by the reference evaluator.
#[derive(Debug, Clone)]
pub struct Reference {
    pub nodes: HashMap<String, f64>,
    pub layers: BTreeMap<Layer, f64>,
    pub overall: f64,
}

/// Straight recursive mean over the raw tree: a leaf is its score, anything
/// else is the sum of its children divided by their count.
pub fn reference_evaluate(doc: &RawSchemaDoc, scores: &[(String, f64)]) -> Reference {
    let lookup: HashMap<&str, f64> = scores.iter().map(|(k, v)| (k.as_str(), *v)).collect();

    fn value(node: &RawNode, lookup: &HashMap<&str, f64>, nodes: &mut HashMap<String, f64>) -> f64 {
        let v = if node.children.is_empty() {
            lookup[node.id.as_str()]
        } else {
            let mut total = 0.0;
            for c in &node.children {
                total += value(c, lookup, nodes);
            }
            total / node.children.len() as f64
        };
        nodes.insert(node.id.clone(), v);
        v
    }

    let mut nodes = HashMap::new();
    let mut layers = BTreeMap::new();
    for (layer, roots) in &doc.layers {
        let mut total = 0.0;
        for r in roots {
            total += value(r, &lookup, &mut nodes);
        }
        layers.insert(*layer, total / roots.len() as f64);
    }
    let overall = layers.values().sum::<f64>() / layers.len() as f64;
    Reference { nodes, layers, overall }
}

/// Validates, binds and evaluates through `isol_core`.
pub fn run_engine(
    doc: &RawSchemaDoc,
    scores: &[(String, f64)],
) -> (isol_core::FrameworkSchema, isol_core::EvaluationResult) {
    let schema = isol_core::validate_schema(doc).expect("generated schemas are valid");
    let assessment = isol_core::bind_assessment(&schema, &scores_doc(scores)).expect("generated scores bind");
    let result = isol_core::evaluate(&schema, &assessment);
    (schema, result)
}

/// Central finite difference of the overall score with respect to one leaf.
/// The leaf's base score is pulled into `[delta, scale - delta]` first so
/// both probes stay in range.
pub fn finite_difference(schema: &isol_core::FrameworkSchema, scores: &[(String, f64)], leaf: &str, delta: f64) -> f64 {
    let probe = |shift: f64| {
        let shifted: Vec<(String, f64)> = scores
            .iter()
            .map(|(id, s)| {
                let v = if id == leaf { s.clamp(delta, schema.scale() - delta) + shift } else { *s };
                (id.clone(), v)
            })
            .collect();
        let assessment = isol_core::bind_assessment(schema, &scores_doc(&shifted)).expect("probe stays in range");
        isol_core::evaluate(schema, &assessment).overall()
    };
    (probe(delta) - probe(-delta)) / (2.0 * delta)
}
