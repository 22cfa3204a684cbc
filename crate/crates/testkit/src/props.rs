//! Engine properties as reusable checks, so unit-level proptests and the
//! acceptance runner exercise identical assertions.

use isol_core::{gap_report, sensitivities, sensitivity, validate_schema, RawSchemaDoc};
use proptest::prelude::*;
use proptest::sample::Index;

use crate::{finite_difference, reference_evaluate, run_engine, SCALE};

type Scores = [(String, f64)];

fn ancestors(id: &str) -> impl Iterator<Item = &str> {
    id.char_indices().filter(|(_, c)| *c == '.').map(move |(i, _)| &id[..i])
}

/// Every value agrees with the naive evaluator within `tol`.
pub fn oracle_agreement(doc: &RawSchemaDoc, scores: &Scores, tol: f64) -> Result<(), TestCaseError> {
    let (schema, result) = run_engine(doc, scores);
    let oracle = reference_evaluate(doc, scores);
    prop_assert_eq!(result.nodes().count(), schema.node_count());
    prop_assert_eq!(oracle.nodes.len(), schema.node_count());
    for node in result.nodes() {
        prop_assert!((node.value - oracle.nodes[&node.id]).abs() <= tol, "node {}", node.id);
    }
    for layer in result.layers() {
        prop_assert!((layer.value - oracle.layers[&layer.layer]).abs() <= tol, "layer {}", layer.layer);
    }
    prop_assert!((result.overall() - oracle.overall).abs() <= tol);
    Ok(())
}

/// Analytic sensitivities match central differences (relative `rel_tol`)
/// for every leaf, or every `stride`-th leaf, and sum to one.
pub fn sensitivity_agreement(
    doc: &RawSchemaDoc,
    scores: &Scores,
    stride: usize,
    rel_tol: f64,
    sum_tol: f64,
) -> Result<(), TestCaseError> {
    let schema = validate_schema(doc).expect("valid");
    let delta = 1e-4 * SCALE;
    let all = sensitivities(&schema);
    for (id, s) in all.iter().step_by(stride) {
        prop_assert!(*s > 0.0);
        let fd = finite_difference(&schema, scores, id, delta);
        prop_assert!(((fd - s) / s).abs() <= rel_tol, "leaf {}: fd {} vs analytic {}", id, fd, s);
    }
    let total: f64 = all.iter().map(|(_, s)| s).sum();
    prop_assert!((total - 1.0).abs() <= sum_tol, "sum {}", total);
    Ok(())
}

pub fn bounded(doc: &RawSchemaDoc, scores: &Scores) -> Result<(), TestCaseError> {
    let (schema, result) = run_engine(doc, scores);
    for v in schema.walk() {
        if v.node.is_leaf() {
            continue;
        }
        let value = result.node(v.node.id()).unwrap().value;
        let children: Vec<f64> = v.node.children().iter().map(|c| result.node(c.id()).unwrap().value).collect();
        let lo = children.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = children.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= value && value <= hi, "{} = {} not within [{}, {}]", v.node.id(), value, lo, hi);
    }
    for layer in result.layers() {
        prop_assert!((0.0..=schema.scale()).contains(&layer.value));
    }
    prop_assert!((0.0..=schema.scale()).contains(&result.overall()));
    Ok(())
}

pub fn uniform_fixed_point(doc: &RawSchemaDoc, scores: &Scores, c: f64) -> Result<(), TestCaseError> {
    let uniform: Vec<_> = scores.iter().map(|(id, _)| (id.clone(), c)).collect();
    let (_, result) = run_engine(doc, &uniform);
    for node in result.nodes() {
        prop_assert!((node.value - c).abs() <= 1e-12);
    }
    for layer in result.layers() {
        prop_assert!((layer.value - c).abs() <= 1e-12);
    }
    prop_assert!((result.overall() - c).abs() <= 1e-12);
    Ok(())
}

pub fn permutation_invariant(doc: &RawSchemaDoc, scores: &Scores, keys: &[u64]) -> Result<(), TestCaseError> {
    let (_, a) = run_engine(doc, scores);
    let (_, b) = run_engine(&crate::permute_children(doc, keys), scores);
    for node in a.nodes() {
        prop_assert!((node.value - b.node(&node.id).unwrap().value).abs() <= 1e-12, "node {}", node.id);
    }
    for layer in a.layers() {
        prop_assert!((layer.value - b.layer(layer.layer).unwrap().value).abs() <= 1e-12);
    }
    prop_assert!((a.overall() - b.overall()).abs() <= 1e-12);
    Ok(())
}

/// Raising one leaf by `delta` raises the overall by exactly
/// `delta * sensitivity` (within 1e-9) and strictly raises every ancestor.
pub fn monotone_increment(doc: &RawSchemaDoc, scores: &Scores, pick: Index, delta: f64) -> Result<(), TestCaseError> {
    let leaf = pick.index(scores.len());
    let mut base = scores.to_vec();
    base[leaf].1 *= 0.99;
    let mut raised = base.clone();
    raised[leaf].1 += delta;

    let (schema, before) = run_engine(doc, &base);
    let (_, after) = run_engine(doc, &raised);
    let id = &base[leaf].0;
    let s = sensitivity(&schema, id).unwrap();
    prop_assert!((after.overall() - before.overall() - delta * s).abs() <= 1e-9);
    prop_assert!(after.overall() > before.overall());
    for ancestor in ancestors(id) {
        prop_assert!(after.node(ancestor).unwrap().value > before.node(ancestor).unwrap().value, "{}", ancestor);
    }
    let layer = schema.layer_of(id).unwrap();
    prop_assert!(after.layer(layer).unwrap().value > before.layer(layer).unwrap().value);
    Ok(())
}

/// `s -> a*s + b` on every leaf maps every computed value the same way.
/// `b_frac` picks `b` within the room left so results stay in range.
pub fn affine_equivariant(doc: &RawSchemaDoc, scores: &Scores, a: f64, b_frac: f64) -> Result<(), TestCaseError> {
    let b = b_frac * (SCALE - a * SCALE);
    let mapped: Vec<_> = scores.iter().map(|(id, s)| (id.clone(), (a * s + b).min(SCALE))).collect();
    let (_, x) = run_engine(doc, scores);
    let (_, y) = run_engine(doc, &mapped);
    for node in x.nodes() {
        prop_assert!((y.node(&node.id).unwrap().value - (a * node.value + b)).abs() <= 1e-9);
    }
    for layer in x.layers() {
        prop_assert!((y.layer(layer.layer).unwrap().value - (a * layer.value + b)).abs() <= 1e-9);
    }
    prop_assert!((y.overall() - (a * x.overall() + b)).abs() <= 1e-9);
    Ok(())
}

/// The top-priority layer is a minimum-achievement layer, priorities are
/// non-increasing along the ranking and priority + achievement = ideal.
pub fn ranking_consistent(doc: &RawSchemaDoc, scores: &Scores) -> Result<(), TestCaseError> {
    let (_, result) = run_engine(doc, scores);
    let gaps = gap_report(&result);
    let top = gaps.gap(gaps.ranking()[0]).unwrap();
    let min_achievement = result.layers().map(|l| l.value).fold(f64::INFINITY, f64::min);
    prop_assert_eq!(top.achievement, min_achievement);
    let ranked: Vec<_> = gaps.ranked().collect();
    prop_assert_eq!(ranked.len(), 6);
    for w in ranked.windows(2) {
        prop_assert!(w[0].priority >= w[1].priority);
    }
    for g in gaps.gaps() {
        prop_assert!((g.priority + g.achievement - g.ideal).abs() <= 1e-12);
    }
    Ok(())
}
