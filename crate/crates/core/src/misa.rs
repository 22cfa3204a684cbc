//! Built-in Multimedia Information Security Architecture (MISA) schema.
//!
//! Eight numbered controls, each assigned to one layer. Controls are leaves;
//! users who want to score individual sections export this schema, add
//! `n.1`, `n.2`, ... children and load it back as a file.

use crate::error::Violation;
use crate::ingest::{RawNode, RawSchemaDoc};
use crate::layer::Layer;
use crate::schema::{validate_schema, FrameworkSchema, DEFAULT_SCALE};

/// CLI reference for the built-in schema.
pub const BUILTIN_REF: &str = "builtin:misa";

pub const SCHEMA_NAME: &str = "Multimedia Information Security Architecture";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MisaControl {
    pub number: u8,
    pub title: &'static str,
    pub layer: Layer,
    pub description: &'static str,
}

/// The eight controls, grouped by layer in enumeration order.
pub const CONTROLS: [MisaControl; 8] = [
    MisaControl {
        number: 5,
        title: "Security Program",
        layer: Layer::Organization,
        description: "Security initiatives, their priorities and high-level threat and risk analysis.",
    },
    MisaControl {
        number: 8,
        title: "Security Awareness",
        layer: Layer::Stakeholder,
        description: "How well members understand and act on protecting physical and information assets.",
    },
    MisaControl {
        number: 1,
        title: "Security Infrastructure",
        layer: Layer::ToolTechnology,
        description: "Infrastructure components that affect security, multimedia handling in particular.",
    },
    MisaControl {
        number: 7,
        title: "Enterprise Security",
        layer: Layer::ToolTechnology,
        description: "Security processes, systems and units described and aligned with business goals.",
    },
    MisaControl {
        number: 6,
        title: "Multimedia Information Sharing",
        layer: Layer::Policy,
        description: "Rules governing how multimedia information resources are shared between parties.",
    },
    MisaControl {
        number: 2,
        title: "Security Policies",
        layer: Layer::Policy,
        description: "The organization's adopted security measures, typically drawn from a published standard.",
    },
    MisaControl {
        number: 3,
        title: "Security Culture",
        layer: Layer::Culture,
        description: "Collaboration, governance and the shared habits around security.",
    },
    MisaControl {
        number: 4,
        title: "Monitoring Compliance",
        layer: Layer::Knowledge,
        description: "Checking existing multimedia information practice against a benchmark standard.",
    },
];

pub fn control(number: i64) -> Result<&'static MisaControl, Violation> {
    CONTROLS.iter().find(|c| i64::from(c.number) == number).ok_or(Violation::UnknownControl { number })
}

pub fn layer_of_control(number: i64) -> Result<Layer, Violation> {
    control(number).map(|c| c.layer)
}

pub fn misa_document() -> RawSchemaDoc {
    let mut doc = RawSchemaDoc { name: SCHEMA_NAME.to_owned(), scale: DEFAULT_SCALE, layers: Default::default() };
    for c in &CONTROLS {
        doc.layers.entry(c.layer).or_default().push(RawNode {
            id: c.number.to_string(),
            title: c.title.to_owned(),
            children: Vec::new(),
        });
    }
    doc
}

/// The validated built-in schema.
pub fn misa_framework() -> FrameworkSchema {
    validate_schema(&misa_document()).expect("built-in MISA schema is valid")
}
