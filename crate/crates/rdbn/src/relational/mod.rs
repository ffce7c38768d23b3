//! Typed relational vocabularies, ground predicates, world states, the `≺`
//! ordering, and a first-order formula evaluator over finite domains.

mod formula;
mod ordering;
mod state;
mod vocab;

pub use formula::{Binding, CmpOp, EvalCtx, Formula, FormulaError, SelfRestrict, Slice, Term};
pub use ordering::{precedes, Ordering, OrderingError};
pub use state::{Fact, WorldState};
pub use vocab::{
    Certainty, ConstId, GroundPredicate, PredId, PredicateKind, PredicateSignature, TypeId,
    VocabError, Vocabulary,
};
