//! First-order formulas over a finite relational domain and their evaluator.
//!
//! Atoms may reference the current slice `t` or the previous slice `t-1`,
//! which makes first-order Markov structure a property of the syntax. The
//! formula language is standard first-order logic plus counting quantifiers
//! `#(op n) x. F` and term equality (the expansion of a counting quantifier
//! into plain quantifiers requires `x1 != x2`, so equality is part of the
//! language even though plain models rarely write it).
//!
//! Quantifier domains are the full declared type. The one non-standard hook
//! is [`SelfRestrict`]: when a probability-tree evaluator queries a ground
//! predicate, atoms of that same predicate at the current slice must only
//! match groundings that precede the query under `≺`. The restriction is
//! supplied by the caller; plain `evaluate` passes none and gets textbook
//! semantics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ordering::Ordering;
use super::state::WorldState;
use super::vocab::{ConstId, GroundPredicate, PredId, TypeId, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(ConstId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slice {
    Current,
    Previous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Lt,
    Gt,
    Ge,
    Le,
}

impl CmpOp {
    pub fn holds(self, count: i64, n: i64) -> bool {
        match self {
            CmpOp::Eq => count == n,
            CmpOp::Lt => count < n,
            CmpOp::Gt => count > n,
            CmpOp::Ge => count >= n,
            CmpOp::Le => count <= n,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Le => "<=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Formula {
    Atom {
        pred: PredId,
        args: Vec<Term>,
        slice: Slice,
    },
    TermEq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists {
        var: String,
        ty: TypeId,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        ty: TypeId,
        body: Box<Formula>,
    },
    CountCmp {
        op: CmpOp,
        n: i64,
        var: String,
        ty: TypeId,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn and(fs: Vec<Formula>) -> Formula {
        Formula::And(fs)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Variables free in this formula (not bound by a quantifier/counter).
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut visit_term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            if let Term::Var(v) = t {
                if !bound.contains(v) && !out.contains(v) {
                    out.push(v.clone());
                }
            }
        };
        match self {
            Formula::Atom { args, .. } => {
                for t in args {
                    visit_term(t, bound, out);
                }
            }
            Formula::TermEq(a, b) => {
                visit_term(a, bound, out);
                visit_term(b, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Exists { var, body, .. }
            | Formula::Forall { var, body, .. }
            | Formula::CountCmp { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormulaError {
    #[error("unbound variable `{0}`")]
    UnboundVar(String),
    #[error("atom references the previous slice but no previous state was supplied")]
    NoPreviousState,
    #[error("arity mismatch in atom of `{0}`")]
    AtomArity(String),
}

/// A variable environment. Bindings are scoped: quantifiers push and pop.
#[derive(Debug, Clone, Default)]
pub struct Binding {
    stack: Vec<(String, ConstId)>,
}

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: &str, c: ConstId) {
        self.stack.push((var.to_string(), c));
    }

    pub fn pop(&mut self) {
        self.stack.pop();
    }

    pub fn get(&self, var: &str) -> Option<ConstId> {
        self.stack
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|&(_, c)| c)
    }

    pub fn from_pairs(pairs: &[(&str, ConstId)]) -> Self {
        Self {
            stack: pairs.iter().map(|&(v, c)| (v.to_string(), c)).collect(),
        }
    }
}

/// Restriction applied to current-slice atoms of a model's own predicate:
/// such an atom is satisfied only by groundings that strictly precede the
/// query grounding under `≺`.
#[derive(Clone, Copy)]
pub struct SelfRestrict<'a> {
    pub pred: PredId,
    pub query: &'a GroundPredicate,
    pub ordering: &'a Ordering,
}

/// Everything an evaluation needs besides the variable environment.
#[derive(Clone, Copy)]
pub struct EvalCtx<'a> {
    pub vocab: &'a Vocabulary,
    pub state: &'a WorldState,
    pub prev: Option<&'a WorldState>,
    pub self_restrict: Option<SelfRestrict<'a>>,
}

impl<'a> EvalCtx<'a> {
    pub fn new(vocab: &'a Vocabulary, state: &'a WorldState, prev: Option<&'a WorldState>) -> Self {
        Self {
            vocab,
            state,
            prev,
            self_restrict: None,
        }
    }
}

fn resolve(term: &Term, env: &Binding) -> Result<ConstId, FormulaError> {
    match term {
        Term::Const(c) => Ok(*c),
        Term::Var(v) => env.get(v).ok_or_else(|| FormulaError::UnboundVar(v.clone())),
    }
}

fn eval_atom(
    ctx: &EvalCtx,
    env: &Binding,
    pred: PredId,
    args: &[Term],
    slice: Slice,
) -> Result<bool, FormulaError> {
    let sig = ctx.vocab.signature(pred);
    if sig.arity() != args.len() {
        return Err(FormulaError::AtomArity(sig.name.clone()));
    }
    let mut ground = Vec::with_capacity(args.len());
    for t in args {
        ground.push(resolve(t, env)?);
    }
    match slice {
        Slice::Previous => {
            let prev = ctx.prev.ok_or(FormulaError::NoPreviousState)?;
            Ok(prev.holds(pred, &ground))
        }
        Slice::Current => {
            if let Some(r) = ctx.self_restrict {
                if r.pred == pred {
                    // Own predicate at the query's slice: only groundings
                    // preceding the query may match (closed world otherwise).
                    if !ctx.state.holds(pred, &ground) {
                        return Ok(false);
                    }
                    let g = GroundPredicate::new(pred, ground, r.query.time);
                    let before = super::ordering::precedes(ctx.vocab, r.ordering, &g, r.query)
                        .unwrap_or(false);
                    return Ok(before);
                }
            }
            Ok(ctx.state.holds(pred, &ground))
        }
    }
}

/// Standard first-order satisfaction over the finite domain.
pub fn evaluate(f: &Formula, ctx: &EvalCtx, env: &mut Binding) -> Result<bool, FormulaError> {
    match f {
        Formula::Atom { pred, args, slice } => eval_atom(ctx, env, *pred, args, *slice),
        Formula::TermEq(a, b) => Ok(resolve(a, env)? == resolve(b, env)?),
        Formula::Not(inner) => Ok(!evaluate(inner, ctx, env)?),
        Formula::And(fs) => {
            for g in fs {
                if !evaluate(g, ctx, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if evaluate(g, ctx, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Exists { var, ty, body } => {
            for &c in ctx.vocab.members(*ty) {
                env.bind(var, c);
                let hit = evaluate(body, ctx, env)?;
                env.pop();
                if hit {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall { var, ty, body } => {
            for &c in ctx.vocab.members(*ty) {
                env.bind(var, c);
                let hit = evaluate(body, ctx, env)?;
                env.pop();
                if !hit {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::CountCmp {
            op,
            n,
            var,
            ty,
            body,
        } => {
            let count = count_satisfying(var, *ty, body, ctx, env)?;
            Ok(op.holds(count as i64, *n))
        }
    }
}

/// Exact number of constants of `ty` satisfying `body` with `var` bound.
pub fn count_satisfying(
    var: &str,
    ty: TypeId,
    body: &Formula,
    ctx: &EvalCtx,
    env: &mut Binding,
) -> Result<usize, FormulaError> {
    let mut count = 0;
    for &c in ctx.vocab.members(ty) {
        env.bind(var, c);
        let hit = evaluate(body, ctx, env)?;
        env.pop();
        if hit {
            count += 1;
        }
    }
    Ok(count)
}

/// Evaluates a formula whose root is a chain of existentials, returning the
/// lexicographically least witnesses (least under the per-type constant
/// order, outermost variable first) when the formula is satisfiable.
///
/// The returned list pairs each chain variable with its witness in chain
/// order. For a formula that is not an existential chain this degrades to
/// plain evaluation with an empty witness list.
pub fn evaluate_with_witnesses(
    f: &Formula,
    ctx: &EvalCtx,
    env: &mut Binding,
) -> Result<Option<Vec<(String, ConstId)>>, FormulaError> {
    match f {
        Formula::Exists { var, ty, body } => {
            for &c in ctx.vocab.members(*ty) {
                env.bind(var, c);
                let found = evaluate_with_witnesses(body, ctx, env)?;
                env.pop();
                if let Some(mut ws) = found {
                    ws.insert(0, (var.clone(), c));
                    return Ok(Some(ws));
                }
            }
            Ok(None)
        }
        _ => Ok(evaluate(f, ctx, env)?.then(Vec::new)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relational::vocab::{Certainty, PredicateKind, Vocabulary};

    struct Fx {
        vocab: Vocabulary,
        color: PredId,
        bracket: PredId,
        obj: TypeId,
        colors: TypeId,
    }

    fn fixture() -> (Fx, WorldState) {
        let mut v = Vocabulary::new();
        let obj = v.add_type("obj").unwrap();
        let colors = v.add_type("color").unwrap();
        for n in ["p1", "b1", "w1", "w2", "w3"] {
            v.add_constant(obj, n).unwrap();
        }
        for n in ["red", "blue"] {
            v.add_constant(colors, n).unwrap();
        }
        let color = v
            .add_predicate(
                "Color",
                vec![obj, colors],
                PredicateKind::Simple,
                Certainty::Uncertain,
            )
            .unwrap();
        let bracket = v
            .add_predicate(
                "Bracket",
                vec![obj],
                PredicateKind::Simple,
                Certainty::Certain,
            )
            .unwrap();
        let mut s = WorldState::new(0);
        let red = v.lookup_constant("red").unwrap();
        for n in ["p1", "b1"] {
            let c = v.lookup_constant(n).unwrap();
            s.insert_ground(color, &[c, red]);
        }
        for n in ["w1", "w2", "w3"] {
            let c = v.lookup_constant(n).unwrap();
            s.insert_ground(bracket, &[c]);
        }
        (
            Fx {
                vocab: v,
                color,
                bracket,
                obj,
                colors,
            },
            s,
        )
    }

    #[test]
    fn witnessed_existential() {
        let (fx, s) = fixture();
        let ctx = EvalCtx::new(&fx.vocab, &s, None);
        // exists c. Color(P1, c) and Color(B1, c)
        let p1 = fx.vocab.lookup_constant("p1").unwrap();
        let b1 = fx.vocab.lookup_constant("b1").unwrap();
        let f = Formula::Exists {
            var: "c".into(),
            ty: fx.colors,
            body: Box::new(Formula::And(vec![
                Formula::Atom {
                    pred: fx.color,
                    args: vec![Term::Const(p1), Term::Var("c".into())],
                    slice: Slice::Current,
                },
                Formula::Atom {
                    pred: fx.color,
                    args: vec![Term::Const(b1), Term::Var("c".into())],
                    slice: Slice::Current,
                },
            ])),
        };
        let mut env = Binding::new();
        assert!(evaluate(&f, &ctx, &mut env).unwrap());
        let w = evaluate_with_witnesses(&f, &ctx, &mut env).unwrap().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(fx.vocab.constant_name(w[0].1), "red");
    }

    #[test]
    fn counting_by_enumeration() {
        let (fx, s) = fixture();
        let ctx = EvalCtx::new(&fx.vocab, &s, None);
        let f = Formula::CountCmp {
            op: CmpOp::Ge,
            n: 2,
            var: "x".into(),
            ty: fx.obj,
            body: Box::new(Formula::Atom {
                pred: fx.bracket,
                args: vec![Term::Var("x".into())],
                slice: Slice::Current,
            }),
        };
        let mut env = Binding::new();
        assert!(evaluate(&f, &ctx, &mut env).unwrap());
        let exact = count_satisfying(
            "x",
            fx.obj,
            &Formula::Atom {
                pred: fx.bracket,
                args: vec![Term::Var("x".into())],
                slice: Slice::Current,
            },
            &ctx,
            &mut env,
        )
        .unwrap();
        assert_eq!(exact, 3);
    }

    #[test]
    fn boolean_semantics() {
        let (fx, s) = fixture();
        let ctx = EvalCtx::new(&fx.vocab, &s, None);
        let p1 = fx.vocab.lookup_constant("p1").unwrap();
        let red = fx.vocab.lookup_constant("red").unwrap();
        let atom = Formula::Atom {
            pred: fx.color,
            args: vec![Term::Const(p1), Term::Const(red)],
            slice: Slice::Current,
        };
        let f = Formula::And(vec![atom.clone(), Formula::not(atom)]);
        let mut env = Binding::new();
        assert!(!evaluate(&f, &ctx, &mut env).unwrap());
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let (fx, s) = fixture();
        let ctx = EvalCtx::new(&fx.vocab, &s, None);
        let f = Formula::Atom {
            pred: fx.bracket,
            args: vec![Term::Var("z".into())],
            slice: Slice::Current,
        };
        let mut env = Binding::new();
        assert_eq!(
            evaluate(&f, &ctx, &mut env),
            Err(FormulaError::UnboundVar("z".into()))
        );
    }

    #[test]
    fn previous_slice_requires_prev_state() {
        let (fx, s) = fixture();
        let ctx = EvalCtx::new(&fx.vocab, &s, None);
        let p1 = fx.vocab.lookup_constant("p1").unwrap();
        let red = fx.vocab.lookup_constant("red").unwrap();
        let f = Formula::Atom {
            pred: fx.color,
            args: vec![Term::Const(p1), Term::Const(red)],
            slice: Slice::Previous,
        };
        let mut env = Binding::new();
        assert_eq!(
            evaluate(&f, &ctx, &mut env),
            Err(FormulaError::NoPreviousState)
        );
    }
}
