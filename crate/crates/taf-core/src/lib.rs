//! Exact fuzzy evaluation of argument graphs.
//!
//! The library models discussions as graphs of propositions connected by
//! attack and support schemes, evaluates labellings of those graphs over a
//! finite rational truth grid with Łukasiewicz connectives, and grades
//! labellings by classical acceptability properties (consistency,
//! admissibility, stability, completeness, preference, groundedness) as well
//! as actor-level measures built on trust and commitment. All arithmetic is
//! exact; no floating point enters any result.
//!
//! Module map:
//! - [`rational`]: exact parsing of decimal and fraction literals.
//! - [`truth`]: the truth-value grid and Łukasiewicz algebra.
//! - [`dsl`]: the scheme interpretation language (parse, print, evaluate).
//! - [`model`]: propositions, schemes, applications, beliefs, validation.
//! - [`complex`]: chaining applications into composite ones.
//! - [`semantics`]: grading labellings by acceptability properties.
//! - [`actors`]: rationality, trust, and similarity measures over entities.
//! - [`dung`]: classical abstract argumentation and its embedding.

pub mod actors;
pub mod complex;
pub mod dsl;
pub mod dung;
pub mod model;
pub mod rational;
pub mod semantics;
pub mod truth;

pub use model::{
    builtin_scheme, builtin_schemes, BeliefPredicate, Proposition, PropositionId, PropositionKind,
    Scheme, SchemeApplication, SchemeError, SchemeId, SchemeKind, Taf, Violation,
};
pub use truth::{TruthError, TruthGrid, TruthValue};
