//! Vocabularies: object types, ordered constant lists, predicate signatures.
//!
//! Constants are registered globally (by name) and then attached to one or
//! more types. A type's constant list is duplicate-free and totally ordered;
//! that order is the constant part of the `≺` ordering. Letting a constant
//! belong to several types gives cheap union types (e.g. a `part` type
//! containing every plate and bracket) without a subtyping mechanism.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConstId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PredId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredicateKind {
    Simple,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certainty {
    Certain,
    Uncertain,
}

/// A predicate signature. The time argument is implicit and always last.
///
/// `kind = Complex` is an explicit model-author declaration: it is only
/// meaningful when at least two argument positions range over large object
/// types, and the library never infers it from domain sizes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredicateSignature {
    pub name: String,
    pub arg_types: Vec<TypeId>,
    pub kind: PredicateKind,
    pub certainty: Certainty,
}

impl PredicateSignature {
    pub fn arity(&self) -> usize {
        self.arg_types.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabError {
    #[error("duplicate type `{0}`")]
    DuplicateType(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("constant `{constant}` already declared in type `{ty}`")]
    DuplicateConstant { constant: String, ty: String },
    #[error("duplicate predicate `{0}`")]
    DuplicatePredicate(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("predicate `{pred}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        got: usize,
    },
    #[error("constant `{constant}` is not of type `{ty}` (argument {pos} of `{pred}`)")]
    ArgTypeMismatch {
        pred: String,
        pos: usize,
        constant: String,
        ty: String,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct TypeDecl {
    name: String,
    /// Ordered member list; position is the constant's rank within the type.
    members: Vec<ConstId>,
}

/// A typed relational vocabulary.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Vocabulary {
    types: Vec<TypeDecl>,
    constants: Vec<String>,
    predicates: Vec<PredicateSignature>,
    #[serde(skip)]
    type_index: HashMap<String, TypeId>,
    #[serde(skip)]
    const_index: HashMap<String, ConstId>,
    #[serde(skip)]
    pred_index: HashMap<String, PredId>,
    /// rank_in_type[t][c] = position of constant c in type t, if a member.
    #[serde(skip)]
    ranks: Vec<HashMap<ConstId, u32>>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_type(&mut self, name: &str) -> Result<TypeId, VocabError> {
        if self.type_index.contains_key(name) {
            return Err(VocabError::DuplicateType(name.to_string()));
        }
        let id = TypeId(self.types.len() as u16);
        self.types.push(TypeDecl {
            name: name.to_string(),
            members: Vec::new(),
        });
        self.ranks.push(HashMap::new());
        self.type_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Registers `name` globally if new and appends it to `ty`'s member list.
    pub fn add_constant(&mut self, ty: TypeId, name: &str) -> Result<ConstId, VocabError> {
        let id = match self.const_index.get(name) {
            Some(&id) => id,
            None => {
                let id = ConstId(self.constants.len() as u16);
                self.constants.push(name.to_string());
                self.const_index.insert(name.to_string(), id);
                id
            }
        };
        let decl = &mut self.types[ty.0 as usize];
        if self.ranks[ty.0 as usize].contains_key(&id) {
            return Err(VocabError::DuplicateConstant {
                constant: name.to_string(),
                ty: decl.name.clone(),
            });
        }
        let rank = decl.members.len() as u32;
        decl.members.push(id);
        self.ranks[ty.0 as usize].insert(id, rank);
        Ok(id)
    }

    pub fn add_predicate(
        &mut self,
        name: &str,
        arg_types: Vec<TypeId>,
        kind: PredicateKind,
        certainty: Certainty,
    ) -> Result<PredId, VocabError> {
        if self.pred_index.contains_key(name) {
            return Err(VocabError::DuplicatePredicate(name.to_string()));
        }
        let id = PredId(self.predicates.len() as u16);
        self.predicates.push(PredicateSignature {
            name: name.to_string(),
            arg_types,
            kind,
            certainty,
        });
        self.pred_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn types(&self) -> impl Iterator<Item = (TypeId, &str)> {
        self.types
            .iter()
            .enumerate()
            .map(|(i, t)| (TypeId(i as u16), t.name.as_str()))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (PredId, &PredicateSignature)> {
        self.predicates
            .iter()
            .enumerate()
            .map(|(i, p)| (PredId(i as u16), p))
    }

    pub fn num_predicates(&self) -> usize {
        self.predicates.len()
    }

    pub fn num_constants(&self) -> usize {
        self.constants.len()
    }

    pub fn signature(&self, pred: PredId) -> &PredicateSignature {
        &self.predicates[pred.0 as usize]
    }

    pub fn type_name(&self, ty: TypeId) -> &str {
        &self.types[ty.0 as usize].name
    }

    pub fn constant_name(&self, c: ConstId) -> &str {
        &self.constants[c.0 as usize]
    }

    pub fn pred_name(&self, p: PredId) -> &str {
        &self.predicates[p.0 as usize].name
    }

    pub fn lookup_type(&self, name: &str) -> Option<TypeId> {
        self.type_index.get(name).copied()
    }

    pub fn lookup_constant(&self, name: &str) -> Option<ConstId> {
        self.const_index.get(name).copied()
    }

    pub fn lookup_pred(&self, name: &str) -> Option<PredId> {
        self.pred_index.get(name).copied()
    }

    /// Members of a type in declaration order (the constant part of `≺`).
    pub fn members(&self, ty: TypeId) -> &[ConstId] {
        &self.types[ty.0 as usize].members
    }

    /// Rank of `c` within `ty`'s ordered member list, if `c : ty`.
    pub fn rank_in_type(&self, ty: TypeId, c: ConstId) -> Option<u32> {
        self.ranks[ty.0 as usize].get(&c).copied()
    }

    pub fn is_member(&self, ty: TypeId, c: ConstId) -> bool {
        self.ranks[ty.0 as usize].contains_key(&c)
    }

    /// Checks that `args` match `pred`'s signature in arity and types.
    pub fn check_ground(&self, pred: PredId, args: &[ConstId]) -> Result<(), VocabError> {
        let sig = self.signature(pred);
        if sig.arity() != args.len() {
            return Err(VocabError::ArityMismatch {
                pred: sig.name.clone(),
                expected: sig.arity(),
                got: args.len(),
            });
        }
        for (pos, (&ty, &c)) in sig.arg_types.iter().zip(args).enumerate() {
            if !self.is_member(ty, c) {
                return Err(VocabError::ArgTypeMismatch {
                    pred: sig.name.clone(),
                    pos,
                    constant: self.constant_name(c).to_string(),
                    ty: self.type_name(ty).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Rebuilds the name and rank indexes after deserialization.
    pub fn rebuild_indexes(&mut self) {
        self.type_index = self
            .types
            .iter()
            .enumerate()
            .map(|(i, t)| (t.name.clone(), TypeId(i as u16)))
            .collect();
        self.const_index = self
            .constants
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), ConstId(i as u16)))
            .collect();
        self.pred_index = self
            .predicates
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), PredId(i as u16)))
            .collect();
        self.ranks = self
            .types
            .iter()
            .map(|t| {
                t.members
                    .iter()
                    .enumerate()
                    .map(|(r, &c)| (c, r as u32))
                    .collect()
            })
            .collect();
    }
}

/// A predicate applied to constants at a time step; the unit of state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundPredicate {
    pub pred: PredId,
    pub args: Vec<ConstId>,
    pub time: u32,
}

impl GroundPredicate {
    pub fn new(pred: PredId, args: Vec<ConstId>, time: u32) -> Self {
        Self { pred, args, time }
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> GroundDisplay<'a> {
        GroundDisplay { g: self, vocab }
    }
}

pub struct GroundDisplay<'a> {
    g: &'a GroundPredicate,
    vocab: &'a Vocabulary,
}

impl fmt::Display for GroundDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.vocab.pred_name(self.g.pred))?;
        for (i, a) in self.g.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.vocab.constant_name(*a))?;
        }
        write!(f, ",t={})", self.g.time)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_can_belong_to_several_types() {
        let mut v = Vocabulary::new();
        let plate = v.add_type("plate").unwrap();
        let part = v.add_type("part").unwrap();
        let p1 = v.add_constant(plate, "p1").unwrap();
        let p1_again = v.add_constant(part, "p1").unwrap();
        assert_eq!(p1, p1_again);
        assert_eq!(v.rank_in_type(plate, p1), Some(0));
        assert_eq!(v.rank_in_type(part, p1), Some(0));
        assert_eq!(v.num_constants(), 1);
    }

    #[test]
    fn duplicate_within_type_rejected() {
        let mut v = Vocabulary::new();
        let t = v.add_type("obj").unwrap();
        v.add_constant(t, "a").unwrap();
        assert!(matches!(
            v.add_constant(t, "a"),
            Err(VocabError::DuplicateConstant { .. })
        ));
    }

    #[test]
    fn ground_checking() {
        let mut v = Vocabulary::new();
        let obj = v.add_type("obj").unwrap();
        let color = v.add_type("color").unwrap();
        let a = v.add_constant(obj, "a").unwrap();
        let red = v.add_constant(color, "red").unwrap();
        let p = v
            .add_predicate(
                "Color",
                vec![obj, color],
                PredicateKind::Simple,
                Certainty::Uncertain,
            )
            .unwrap();
        assert!(v.check_ground(p, &[a, red]).is_ok());
        assert!(v.check_ground(p, &[red, a]).is_err());
        assert!(v.check_ground(p, &[a]).is_err());
    }
}
