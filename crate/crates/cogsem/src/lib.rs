//! Cognitive-model semantics: observation stores with consistency
//! checking, models over discrete time and space, compositional
//! interpretation of binary dependency trees into denotations, senses and
//! explanations, and a four-valued truth engine.
//!
//! The pipeline runs in three stages:
//!
//! 1. [`model::CognitiveModel`] holds a finite store of
//!    [`observation::PrimitiveObservation`]s plus derived worlds,
//!    processes, objects and named elements.
//! 2. [`interp::interpret`] maps a binary dependency tree, a
//!    [`lexicon::Lexicon`] and a [`lexicon::Context`] to per-node
//!    [`interp::MeaningTriple`]s.
//! 3. [`truth::Evaluator`] assigns each proposition one of the four truth
//!    values T, F, U, V (or the out-of-band `ud` for phrases that are not
//!    sentences).
//!
//! See the `examples/` directory for one runnable program per capability,
//! and the `cogsem` binary for the `validate`, `interpret` and `eval`
//! commands over the JSON file formats in [`format`].

pub mod cli;
#[cfg(test)]
pub(crate) mod fixtures;
pub mod format;
pub mod interp;
pub mod lexicon;
pub mod model;
pub mod observation;
pub mod truth;
pub mod value;

pub use interp::{DepTree, MeaningTriple, Sense};
pub use lexicon::{Context, Lexicon, OperationDef};
pub use model::{CognitiveModel, Element, Segment};
pub use observation::{CompositeObservation, PrimitiveObservation};
pub use truth::{Evaluator, LogicKind, TruthValue, Verdict};
