//! Violation codes shared by schema validation, assessment binding and the engine.

use std::fmt;

use crate::layer::Layer;

/// A single semantic rule violation.
///
/// Each variant maps to a stable `E_*` code (see [`Violation::code`]) that the
/// CLI prints verbatim.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Violation {
    #[error("E_EMPTY_NODE {layer}: layer is declared with an empty node list")]
    EmptyNode { layer: Layer },
    #[error("E_DUP_ID {id}: id appears more than once in the schema")]
    DuplicateId { id: String },
    #[error("E_BAD_PREFIX {child}: child id is not prefixed by its parent id `{parent}`")]
    BadPrefix { parent: String, child: String },
    #[error("E_MISSING_LAYER {layer}: layer has no root nodes")]
    MissingLayer { layer: Layer },
    #[error("E_BAD_SCALE {scale}: scale must be a finite number greater than zero")]
    BadScale { scale: f64 },
    #[error("E_BAD_ID {id:?}: ids are non-empty dot-separated segments")]
    BadId { id: String },
    #[error("E_EMPTY_TITLE {id}: node title is empty")]
    EmptyTitle { id: String },
    #[error("E_MISSING_SCORE {id}: leaf has no score")]
    MissingScore { id: String },
    #[error("E_UNKNOWN_NODE {id}: {reason}")]
    UnknownNode { id: String, reason: UnknownReason },
    #[error("E_NOT_LEAF {id}: node has children and cannot be scored")]
    NotLeaf { id: String },
    #[error("E_RANGE {id}: score {value} is outside [0, {scale}]")]
    Range { id: String, value: f64, scale: f64 },
    #[error("E_UNKNOWN_CONTROL {number}: control numbers run from 1 to 8")]
    UnknownControl { number: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnknownReason {
    NotInSchema,
    Internal,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnknownReason::NotInSchema => f.write_str("id is not in the schema"),
            UnknownReason::Internal => f.write_str("id names an internal node; only leaves take scores"),
        }
    }
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::EmptyNode { .. } => "E_EMPTY_NODE",
            Violation::DuplicateId { .. } => "E_DUP_ID",
            Violation::BadPrefix { .. } => "E_BAD_PREFIX",
            Violation::MissingLayer { .. } => "E_MISSING_LAYER",
            Violation::BadScale { .. } => "E_BAD_SCALE",
            Violation::BadId { .. } => "E_BAD_ID",
            Violation::EmptyTitle { .. } => "E_EMPTY_TITLE",
            Violation::MissingScore { .. } => "E_MISSING_SCORE",
            Violation::UnknownNode { .. } => "E_UNKNOWN_NODE",
            Violation::NotLeaf { .. } => "E_NOT_LEAF",
            Violation::Range { .. } => "E_RANGE",
            Violation::UnknownControl { .. } => "E_UNKNOWN_CONTROL",
        }
    }
}

/// Every violation found in one validation pass, in discovery order.
#[derive(Debug, Clone, PartialEq)]
pub struct Violations(Vec<Violation>);

impl Violations {
    pub(crate) fn from_vec(list: Vec<Violation>) -> Result<(), Violations> {
        if list.is_empty() {
            Ok(())
        } else {
            Err(Violations(list))
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Violation> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn codes(&self) -> Vec<&'static str> {
        self.0.iter().map(Violation::code).collect()
    }

    pub fn into_vec(self) -> Vec<Violation> {
        self.0
    }
}

impl From<Violation> for Violations {
    fn from(v: Violation) -> Self {
        Violations(vec![v])
    }
}

impl<'a> IntoIterator for &'a Violations {
    type Item = &'a Violation;
    type IntoIter = std::slice::Iter<'a, Violation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// One line per violation.
impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Violations {}
