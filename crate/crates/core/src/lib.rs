//! pDMN: probabilistic decision tables compiled to a ProbLog subset,
//! with exact query evaluation by total-choice enumeration.
//!
//! The pipeline is `tableparse` (workbook text -> [`model::PdmnModel`]),
//! `model::validate` (diagnostics), `translate` (model -> [`plcore::LogicProgram`]),
//! and then either `emit` (ProbLog source text) or `plcore::query_exact`
//! (exact rational probabilities).

pub mod diag;
pub mod emit;
pub mod model;
pub mod plcore;
pub mod prob;
pub mod tableparse;
pub mod translate;

pub use diag::{Diagnostic, Severity, SourceSpan};
pub use model::PdmnModel;
pub use plcore::LogicProgram;
pub use prob::Probability;
pub use translate::TranslationOutput;
