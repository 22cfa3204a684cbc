//! The six fixed top-level domains every framework schema is organised under.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A top-level domain of the framework.
///
/// The declaration order is the canonical enumeration order. It drives
/// `Ord`, serialization order of layer maps and priority tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Organization,
    Stakeholder,
    ToolTechnology,
    Policy,
    Culture,
    Knowledge,
}

impl Layer {
    pub const COUNT: usize = 6;

    /// All layers in enumeration order.
    pub const ALL: [Layer; Layer::COUNT] = [
        Layer::Organization,
        Layer::Stakeholder,
        Layer::ToolTechnology,
        Layer::Policy,
        Layer::Culture,
        Layer::Knowledge,
    ];

    /// Machine name used in documents (`tool_technology`, ...).
    pub fn name(self) -> &'static str {
        match self {
            Layer::Organization => "organization",
            Layer::Stakeholder => "stakeholder",
            Layer::ToolTechnology => "tool_technology",
            Layer::Policy => "policy",
            Layer::Culture => "culture",
            Layer::Knowledge => "knowledge",
        }
    }

    /// Display label used in human-readable tables.
    pub fn label(self) -> &'static str {
        match self {
            Layer::Organization => "Organization",
            Layer::Stakeholder => "Stakeholder",
            Layer::ToolTechnology => "Tool & Technology",
            Layer::Policy => "Policy",
            Layer::Culture => "Culture",
            Layer::Knowledge => "Knowledge",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Layer::Organization => {
                "The assessed institution itself: how its people are structured and \
                 managed toward shared, continuing goals."
            }
            Layer::Stakeholder => {
                "Every person, group or outside body whose interests are tied to the \
                 organization and who can influence or be influenced by it."
            }
            Layer::ToolTechnology => {
                "The technical base the organization runs on, both tangible artefacts \
                 such as manuals and prototypes and intangible ones such as training \
                 and problem-solving methods."
            }
            Layer::Policy => {
                "The rules and guiding principles that steer decisions, including \
                 external policy affecting how the organization may develop."
            }
            Layer::Culture => {
                "Shared values and behaviours that decide what counts as acceptable, \
                 important or workable inside the organization."
            }
            Layer::Knowledge => {
                "What the organization knows, held in the skills and judgement of its \
                 people and treated as a productive resource."
            }
        }
    }

    /// Position in the enumeration order, `0..6`.
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown layer `{0}`")]
pub struct UnknownLayer(pub String);

impl FromStr for Layer {
    type Err = UnknownLayer;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Layer::ALL.into_iter().find(|layer| layer.name() == s).ok_or_else(|| UnknownLayer(s.to_owned()))
    }
}
