//! The `≺` ordering over ground predicates.
//!
//! `a ≺ b` iff (1) `time(a) < time(b)`; else (2) equal times and
//! `pred(a) ≺ pred(b)` under the predicate order; else (3) same predicate and
//! the argument tuples differ, with the first differing position holding a
//! constant of strictly smaller rank in that position's type. The time rule
//! takes precedence over the predicate order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::vocab::{GroundPredicate, PredId, Vocabulary};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderingError {
    #[error("ground predicate does not type-check against the vocabulary: {0}")]
    IllTyped(String),
    #[error("predicate `{0}` has no rank in the ordering")]
    UnrankedPredicate(String),
}

/// A total order on predicates plus, via the vocabulary, one on constants.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Ordering {
    /// rank[p] = position of predicate p; lower rank precedes.
    pred_rank: Vec<u32>,
}

impl Ordering {
    /// Builds the order from an explicit predicate list. Every predicate of
    /// the vocabulary must appear exactly once.
    pub fn from_list(vocab: &Vocabulary, order: &[PredId]) -> Result<Self, OrderingError> {
        let mut rank = vec![u32::MAX; vocab.num_predicates()];
        for (i, p) in order.iter().enumerate() {
            rank[p.0 as usize] = i as u32;
        }
        for (p, _) in vocab.predicates() {
            if rank[p.0 as usize] == u32::MAX {
                return Err(OrderingError::UnrankedPredicate(
                    vocab.pred_name(p).to_string(),
                ));
            }
        }
        Ok(Self { pred_rank: rank })
    }

    /// Declaration order of the vocabulary.
    pub fn declaration_order(vocab: &Vocabulary) -> Self {
        Self {
            pred_rank: (0..vocab.num_predicates() as u32).collect(),
        }
    }

    pub fn pred_rank(&self, p: PredId) -> u32 {
        self.pred_rank[p.0 as usize]
    }

    /// True iff `a` strictly precedes `b` at the predicate level.
    pub fn pred_precedes(&self, a: PredId, b: PredId) -> bool {
        self.pred_rank(a) < self.pred_rank(b)
    }
}

/// Strict total order over distinct well-typed ground predicates.
pub fn precedes(
    vocab: &Vocabulary,
    ord: &Ordering,
    a: &GroundPredicate,
    b: &GroundPredicate,
) -> Result<bool, OrderingError> {
    for g in [a, b] {
        vocab
            .check_ground(g.pred, &g.args)
            .map_err(|e| OrderingError::IllTyped(e.to_string()))?;
    }
    if a.time != b.time {
        return Ok(a.time < b.time);
    }
    if a.pred != b.pred {
        return Ok(ord.pred_precedes(a.pred, b.pred));
    }
    let sig = vocab.signature(a.pred);
    for (i, (&x, &y)) in a.args.iter().zip(&b.args).enumerate() {
        if x != y {
            let ty = sig.arg_types[i];
            let rx = vocab.rank_in_type(ty, x).expect("checked above");
            let ry = vocab.rank_in_type(ty, y).expect("checked above");
            return Ok(rx < ry);
        }
    }
    // Identical ground predicates: irreflexive.
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relational::vocab::{Certainty, PredicateKind};

    fn fixture() -> (Vocabulary, Ordering, PredId) {
        let mut v = Vocabulary::new();
        let obj = v.add_type("obj").unwrap();
        for n in ["c1", "c2", "c3"] {
            v.add_constant(obj, n).unwrap();
        }
        let r = v
            .add_predicate(
                "R",
                vec![obj, obj],
                PredicateKind::Simple,
                Certainty::Uncertain,
            )
            .unwrap();
        let ord = Ordering::declaration_order(&v);
        (v, ord, r)
    }

    #[test]
    fn time_dominates() {
        let (v, ord, r) = fixture();
        let c1 = v.lookup_constant("c1").unwrap();
        let a = GroundPredicate::new(r, vec![c1, c1], 3);
        let b = GroundPredicate::new(r, vec![c1, c1], 4);
        assert!(precedes(&v, &ord, &a, &b).unwrap());
        assert!(!precedes(&v, &ord, &b, &a).unwrap());
    }

    #[test]
    fn irreflexive() {
        let (v, ord, r) = fixture();
        let c1 = v.lookup_constant("c1").unwrap();
        let a = GroundPredicate::new(r, vec![c1, c1], 3);
        assert!(!precedes(&v, &ord, &a, &a).unwrap());
    }

    #[test]
    fn lexicographic_on_args() {
        let (v, ord, r) = fixture();
        let c1 = v.lookup_constant("c1").unwrap();
        let c2 = v.lookup_constant("c2").unwrap();
        let a = GroundPredicate::new(r, vec![c2, c1], 0);
        let b = GroundPredicate::new(r, vec![c1, c2], 0);
        // (c2,c1) vs (c1,c2): first difference at position 0, c1 ≺ c2, so b ≺ a.
        assert!(!precedes(&v, &ord, &a, &b).unwrap());
        assert!(precedes(&v, &ord, &b, &a).unwrap());
    }
}
