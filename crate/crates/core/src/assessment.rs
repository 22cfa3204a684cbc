//! Binding raw scores to the leaves of a schema.

use std::collections::{BTreeMap, HashSet};

use crate::error::{UnknownReason, Violation, Violations};
use crate::ingest::RawScoresDoc;
use crate::schema::FrameworkSchema;

/// Scores bound to a schema: exactly one in-range score per leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    name: String,
    scores: BTreeMap<String, f64>,
}

impl Assessment {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn score(&self, leaf_id: &str) -> Option<f64> {
        self.scores.get(leaf_id).copied()
    }

    pub fn scores(&self) -> &BTreeMap<String, f64> {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Checks `raw` against `schema` and returns the bound assessment, or every
/// unknown key, out-of-range score and uncovered leaf.
pub fn bind_assessment(schema: &FrameworkSchema, raw: &RawScoresDoc) -> Result<Assessment, Violations> {
    let scale = schema.scale();
    let mut violations = Vec::new();
    let mut scores = BTreeMap::new();

    for (id, value) in raw.pairs() {
        match schema.node(id) {
            None => violations.push(Violation::UnknownNode { id: id.clone(), reason: UnknownReason::NotInSchema }),
            Some(node) if !node.is_leaf() => {
                violations.push(Violation::UnknownNode { id: id.clone(), reason: UnknownReason::Internal })
            }
            Some(_) if !(0.0..=scale).contains(value) => {
                violations.push(Violation::Range { id: id.clone(), value: *value, scale })
            }
            Some(_) => {
                scores.insert(id.clone(), *value);
            }
        }
    }

    let keyed: HashSet<&str> = raw.pairs().iter().map(|(id, _)| id.as_str()).collect();
    for leaf in schema.leaves() {
        if !keyed.contains(leaf.id()) {
            violations.push(Violation::MissingScore { id: leaf.id().to_owned() });
        }
    }

    Violations::from_vec(violations)?;
    Ok(Assessment { name: raw.name().to_owned(), scores })
}
