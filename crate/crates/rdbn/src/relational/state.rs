//! Closed-world states: the set of ground predicates true at one time step.
//!
//! Facts are packed into a `u64` key (predicate id plus up to three argument
//! ids) so states clone cheaply at particle-filter scale. Two redundant views
//! are maintained alongside the fact set and kept consistent on every insert
//! and removal: an adjacency index from the first argument of each binary or
//! ternary predicate to its partner tuples (this doubles as the attribute
//! index, where a functional simple predicate has a single partner).

use std::collections::{HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};

use serde::{Deserialize, Serialize};

use super::vocab::{ConstId, GroundPredicate, PredId, Vocabulary};

const NO_ARG: u16 = u16::MAX;

/// A timeless ground fact, packed as `pred | a0 | a1 | a2` in 16-bit lanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fact(pub u64);

impl Fact {
    pub fn new(pred: PredId, args: &[ConstId]) -> Self {
        debug_assert!(args.len() <= 3, "facts support arity <= 3");
        let mut k = (pred.0 as u64) << 48;
        for i in 0..3 {
            let lane = args.get(i).map_or(NO_ARG, |c| c.0);
            k |= (lane as u64) << (32 - 16 * i as u64);
        }
        Self(k)
    }

    pub fn pred(self) -> PredId {
        PredId((self.0 >> 48) as u16)
    }

    pub fn args(self) -> impl Iterator<Item = ConstId> {
        (0..3).filter_map(move |i| {
            let lane = ((self.0 >> (32 - 16 * i)) & 0xFFFF) as u16;
            (lane != NO_ARG).then_some(ConstId(lane))
        })
    }

    pub fn arg(self, i: usize) -> ConstId {
        ConstId(((self.0 >> (32 - 16 * i)) & 0xFFFF) as u16)
    }

    pub fn at(self, time: u32) -> GroundPredicate {
        GroundPredicate::new(self.pred(), self.args().collect(), time)
    }
}

/// Multiply-mix hasher for the packed fact keys.
#[derive(Default)]
pub struct FactHasher(u64);

impl Hasher for FactHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }
    fn write_u64(&mut self, x: u64) {
        self.0 = x.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        self.0 ^= self.0 >> 29;
    }
    fn finish(&self) -> u64 {
        self.0
    }
}

type FactBuild = BuildHasherDefault<FactHasher>;

/// The set of ground predicates true at one time step (closed world).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct WorldState {
    time: u32,
    facts: HashSet<Fact, FactBuild>,
    /// (pred, first arg) -> remaining argument tuples, for arity >= 2.
    #[serde(skip)]
    adj: HashMap<(PredId, ConstId), Vec<Fact>, FactBuild>,
}

impl WorldState {
    pub fn new(time: u32) -> Self {
        Self {
            time,
            ..Self::default()
        }
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn set_time(&mut self, time: u32) {
        self.time = time;
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, f: Fact) -> bool {
        self.facts.contains(&f)
    }

    pub fn holds(&self, pred: PredId, args: &[ConstId]) -> bool {
        self.contains(Fact::new(pred, args))
    }

    /// Inserts a fact; returns false if it was already present.
    pub fn insert(&mut self, f: Fact) -> bool {
        if !self.facts.insert(f) {
            return false;
        }
        if f.args().count() >= 2 {
            self.adj.entry((f.pred(), f.arg(0))).or_default().push(f);
        }
        true
    }

    pub fn insert_ground(&mut self, pred: PredId, args: &[ConstId]) -> bool {
        self.insert(Fact::new(pred, args))
    }

    /// Removes a fact; returns false if it was absent.
    pub fn remove(&mut self, f: Fact) -> bool {
        if !self.facts.remove(&f) {
            return false;
        }
        if f.args().count() >= 2 {
            if let Some(v) = self.adj.get_mut(&(f.pred(), f.arg(0))) {
                v.retain(|&g| g != f);
                if v.is_empty() {
                    self.adj.remove(&(f.pred(), f.arg(0)));
                }
            }
        }
        true
    }

    /// All facts `pred(first, ...)` with the given first argument.
    pub fn partners(&self, pred: PredId, first: ConstId) -> &[Fact] {
        self.adj
            .get(&(pred, first))
            .map_or(&[][..], |v| v.as_slice())
    }

    /// The single value of a functional binary predicate, if exactly one holds.
    pub fn value_of(&self, pred: PredId, obj: ConstId) -> Option<ConstId> {
        let p = self.partners(pred, obj);
        match p {
            [f] => Some(f.arg(1)),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Fact> + '_ {
        self.facts.iter().copied()
    }

    /// Facts in packed-key order, for deterministic serialization.
    pub fn sorted_facts(&self) -> Vec<Fact> {
        let mut v: Vec<Fact> = self.facts.iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// A copy advanced to `time`, retaining all facts. Used by simulators
    /// that treat unaffected facts as persisting.
    pub fn advanced(&self) -> Self {
        let mut s = self.clone();
        s.time += 1;
        s
    }

    /// Drops every fact of the given predicate. Used to clear per-step
    /// certain facts such as actions before the next slice.
    pub fn clear_pred(&mut self, pred: PredId) {
        let stale: Vec<Fact> = self
            .facts
            .iter()
            .copied()
            .filter(|f| f.pred() == pred)
            .collect();
        for f in stale {
            self.remove(f);
        }
    }

    /// Rebuilds the adjacency index (after deserialization).
    pub fn rebuild_index(&mut self) {
        self.adj.clear();
        let facts: Vec<Fact> = self.facts.iter().copied().collect();
        for f in facts {
            if f.args().count() >= 2 {
                self.adj.entry((f.pred(), f.arg(0))).or_default().push(f);
            }
        }
    }

    /// Set of facts as ground predicates at this state's time.
    pub fn ground_predicates(&self) -> impl Iterator<Item = GroundPredicate> + '_ {
        let t = self.time;
        self.facts.iter().map(move |f| f.at(t))
    }

    /// Symmetric difference size against another state's fact set.
    pub fn diff_count(&self, other: &WorldState) -> usize {
        let mut d = 0;
        for f in self.iter() {
            if !other.contains(f) {
                d += 1;
            }
        }
        for f in other.iter() {
            if !self.contains(f) {
                d += 1;
            }
        }
        d
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> String {
        let mut out = String::new();
        for f in self.sorted_facts() {
            out.push_str(&format!("{}\n", f.at(self.time).display(vocab)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_roundtrip() {
        let f = Fact::new(PredId(7), &[ConstId(1), ConstId(300)]);
        assert_eq!(f.pred(), PredId(7));
        let args: Vec<_> = f.args().collect();
        assert_eq!(args, vec![ConstId(1), ConstId(300)]);
    }

    #[test]
    fn index_consistency() {
        let mut s = WorldState::new(0);
        let p = PredId(0);
        let f1 = Fact::new(p, &[ConstId(1), ConstId(2)]);
        let f2 = Fact::new(p, &[ConstId(1), ConstId(3)]);
        assert!(s.insert(f1));
        assert!(s.insert(f2));
        assert!(!s.insert(f2));
        assert_eq!(s.partners(p, ConstId(1)).len(), 2);
        assert!(s.remove(f1));
        assert_eq!(s.partners(p, ConstId(1)), &[f2]);
        assert!(s.remove(f2));
        assert!(s.partners(p, ConstId(1)).is_empty());
        assert!(s.is_empty());
    }

    #[test]
    fn value_of_functional() {
        let mut s = WorldState::new(0);
        let p = PredId(0);
        s.insert(Fact::new(p, &[ConstId(0), ConstId(5)]));
        assert_eq!(s.value_of(p, ConstId(0)), Some(ConstId(5)));
        s.insert(Fact::new(p, &[ConstId(0), ConstId(6)]));
        assert_eq!(s.value_of(p, ConstId(0)), None);
    }
}
