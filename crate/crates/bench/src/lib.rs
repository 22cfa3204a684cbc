//! Deterministic inputs for the benchmarks.

use isol_core::{
    bind_assessment, validate_schema, Assessment, FrameworkSchema, Layer, RawNode, RawSchemaDoc, RawScoresDoc,
};

/// A balanced schema: every layer has `branching` roots and every internal
/// node `branching` children, `depth` levels in total. Leaf scores cycle
/// through `0..=100` so results are reproducible.
pub fn balanced(depth: usize, branching: usize) -> (FrameworkSchema, Assessment) {
    fn node(id: String, depth: usize, branching: usize, leaves: &mut Vec<(String, f64)>) -> RawNode {
        let children = if depth <= 1 {
            leaves.push((id.clone(), (leaves.len() * 37 % 101) as f64));
            Vec::new()
        } else {
            (1..=branching).map(|i| node(format!("{id}.{i}"), depth - 1, branching, leaves)).collect()
        };
        RawNode { title: format!("Node {id}"), id, children }
    }

    let mut leaves = Vec::new();
    let mut doc = RawSchemaDoc { name: "balanced".into(), scale: 100.0, layers: Default::default() };
    for (l, layer) in Layer::ALL.into_iter().enumerate() {
        let roots =
            (1..=branching).map(|r| node((l * branching + r).to_string(), depth, branching, &mut leaves)).collect();
        doc.layers.insert(layer, roots);
    }
    let schema = validate_schema(&doc).expect("balanced schema is valid");
    let raw = RawScoresDoc::new("balanced", leaves).expect("unique ids");
    let assessment = bind_assessment(&schema, &raw).expect("scores cover every leaf");
    (schema, assessment)
}
