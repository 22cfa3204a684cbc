//! Six-layer readiness assessment.
//!
//! A [`FrameworkSchema`] groups scoreable controls (and, optionally, deeper
//! sections) under six fixed [`Layer`]s. An [`Assessment`] binds a raw score
//! to every leaf; [`evaluate`] then computes each internal node as the mean
//! of its children, each layer as the mean of its roots and the overall
//! readiness as the mean of the layers. [`gap_report`] turns layer values
//! into ideal/achievement/priority triples.
//!
//! ```
//! use isol_core::{bind_assessment, evaluate, misa_framework, parse_scores, ScoresFormat};
//!
//! let schema = misa_framework();
//! let csv = "node_id,score\n5,54.5\n8,50\n1,51.1\n7,55.8\n6,85\n2,72\n3,47.5\n4,59";
//! let raw = parse_scores(csv, ScoresFormat::Csv).unwrap();
//! let assessment = bind_assessment(&schema, &raw).unwrap();
//! let result = evaluate(&schema, &assessment);
//! assert!((result.overall() - 57.158_333).abs() < 1e-6);
//! ```

pub mod assessment;
pub mod engine;
pub mod error;
pub mod ingest;
pub mod layer;
pub mod misa;
pub mod report;
pub mod schema;

pub use assessment::{bind_assessment, Assessment};
pub use engine::{
    evaluate, gap_report, sensitivities, sensitivity, EvaluationResult, GapReport, LayerGap, LayerValue, NodeValue,
};
pub use error::{UnknownReason, Violation, Violations};
pub use ingest::{
    export_schema, export_scores, parse_schema, parse_scores, IngestError, RawNode, RawSchemaDoc, RawScoresDoc,
    ScoresFormat,
};
pub use layer::Layer;
pub use misa::{layer_of_control, misa_framework, MisaControl};
pub use report::{render_chart_data, render_result, render_sensitivities, round_half_up, Format, RenderOptions};
pub use schema::{validate_schema, FrameworkSchema, SchemaNode};
