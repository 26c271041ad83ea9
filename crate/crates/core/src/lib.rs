//! Value-level evaluation of ordinal survey attributes.
//!
//! * [`dataset`] / [`io`]: the ordinal data model, CSV ingestion and the
//!   per-attribute distance used by both evaluators.
//! * [`relieff`]: ReliefF relevance scores and ranking.
//! * [`ordeval`]: upward/downward reinforcement factors in local contexts
//!   with permutation-null significance.
//! * [`kano`]: Kano quality category from a reinforcement profile.
//! * [`synth`]: synthetic respondent populations with known Kano behavior.
//! * [`report`]: SVG charts and plain-text reports.

pub mod dataset;
pub mod error;
pub mod io;
pub mod kano;
pub mod neighbors;
pub mod ordeval;
pub mod relieff;
pub mod report;
pub mod rng;
pub mod stats;
pub mod synth;

pub use dataset::{instance_distance, value_diff, ClassConditionalTable, Code, OrdinalDataset, OrdinalScale};
pub use error::{Error, Result};
pub use io::{load_csv, write_csv, IngestConfig, ValidationReport, SCHEMA_VERSION};
pub use kano::{classify, classify_all, BaseCategory, KanoCategory, KanoClassification, KanoRules};
pub use ordeval::{
    compute_reinforcements, evaluate_all, evaluate_attribute, nearest_context, null_distribution, CellFamily,
    Direction, OrdEvalParams, ReinforcementCell, ReinforcementProfile,
};
pub use relieff::{rank_attributes, relieff_scores, AttributeScore, ReliefFParams, ReliefFResult};
pub use synth::{generate_population, ground_truth, GroundTruth, KanoShape, SyntheticPopulationSpec};
