//! Relational dynamic Bayesian networks over typed relational domains.
//!
//! The crate is organized around one modeling core and three consumers of it:
//!
//! - [`relational`] — typed vocabularies, ground predicates, world states, the
//!   `≺` ordering over ground predicates, and a first-order formula evaluator
//!   with quantifiers and counting.
//! - [`model`] — first-order probability trees (FOPTs), the two-network model
//!   container (initial network plus two-time-slice transition network),
//!   acyclicity validation, and ordered transition grounding/sampling.
//! - [`parser`] — a textual model language (`.rdbn` files) with positioned
//!   diagnostics and a canonical pretty-printer.
//! - [`sim`] — a generative simulator for a factory assembly domain: domain
//!   construction, synthetic plans, faulty action execution, noisy
//!   observations, trajectory logs, and transition kernels shared with the
//!   filters.
//! - [`filters`] — the inference engines: particle filtering,
//!   Rao-Blackwellised particle filtering, simple smoothing, abstraction
//!   lattice smoothing, and relational kernel density estimation.
//! - [`eval`] — sampled K-L divergence scoring and multi-method experiment
//!   orchestration producing CSV result tables.

pub mod eval;
pub mod filters;
pub mod model;
pub mod parser;
pub mod relational;
pub mod sim;

pub use relational::{
    Binding, Certainty, ConstId, Formula, GroundPredicate, Ordering, PredId, PredicateKind,
    PredicateSignature, Term, TypeId, Vocabulary, WorldState,
};
