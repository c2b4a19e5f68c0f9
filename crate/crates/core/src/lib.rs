//! A workbench for the restricted chase over existential rules.
//!
//! The crate provides the rule/fact vocabulary and its textual languages
//! ([`model`]), conjunctive matching and trigger computation ([`matching`]),
//! restricted and oblivious chase execution under pluggable strategies
//! ([`engine`]), bounded exhaustive exploration and the breadth-first
//! universal-termination semi-decider ([`termination`]), a non-deterministic
//! Turing machine simulator together with the machine-to-rules reduction
//! ([`tmred`]), and executable checkers for the structural invariants the
//! reduction relies on: wild frontiers, state atoms, bow ties ([`validate`]).

pub mod engine;
pub mod matching;
pub mod model;
pub mod termination;
pub mod tmred;
pub mod validate;

pub use model::{
    Atom, FactSet, KnowledgeBase, Rule, RuleSet, Substitution, Term, VarKind,
};
