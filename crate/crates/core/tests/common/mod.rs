//! Shared helpers for the integration suites: random knowledge bases and
//! the naive generate-and-test matching oracle.
//!
//! Each test target uses its own subset of these.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use chase_core::model::{
    Atom, FactSet, KnowledgeBase, Rule, RuleSet, Substitution, Term,
};

pub const PREDS: [(&str, usize); 4] = [("P", 1), ("Q", 1), ("E", 2), ("T", 3)];
pub const CONSTANTS: [&str; 4] = ["a", "b", "c", "d"];
pub const VARS: [&str; 3] = ["x", "y", "z"];

pub fn random_fact(rng: &mut ChaCha8Rng) -> Atom {
    let (pred, arity) = PREDS[rng.gen_range(0..PREDS.len())];
    let args = (0..arity)
        .map(|_| Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]))
        .collect();
    Atom::new(pred, args)
}

pub fn random_fact_set(rng: &mut ChaCha8Rng, max_facts: usize) -> FactSet {
    let mut facts = FactSet::new();
    for _ in 0..rng.gen_range(1..=max_facts) {
        facts.insert(random_fact(rng)).unwrap();
    }
    facts
}

/// A random conjunctive pattern over universal variables and constants.
pub fn random_pattern(rng: &mut ChaCha8Rng, max_atoms: usize) -> Vec<Atom> {
    let mut pattern = Vec::new();
    for _ in 0..rng.gen_range(1..=max_atoms) {
        let (pred, arity) = PREDS[rng.gen_range(0..PREDS.len())];
        let args = (0..arity)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    Term::universal(VARS[rng.gen_range(0..VARS.len())])
                } else {
                    Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())])
                }
            })
            .collect();
        pattern.push(Atom::new(pred, args));
    }
    pattern
}

/// A random small KB: up to `max_rules` rules with the frontier condition
/// holding by construction, over a shared vocabulary.
pub fn random_kb(rng: &mut ChaCha8Rng, max_rules: usize) -> KnowledgeBase {
    let n_rules = rng.gen_range(1..=max_rules);
    let mut rules = Vec::new();
    for i in 0..n_rules {
        let body = random_pattern(rng, 2);
        let body_vars: Vec<&str> = {
            let mut seen = BTreeSet::new();
            for atom in &body {
                for (name, _) in atom.variables() {
                    seen.insert(name);
                }
            }
            seen.into_iter().collect()
        };
        let mut head = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let (pred, arity) = PREDS[rng.gen_range(0..PREDS.len())];
            let args = (0..arity)
                .map(|_| match rng.gen_range(0..3) {
                    0 if !body_vars.is_empty() => {
                        Term::universal(body_vars[rng.gen_range(0..body_vars.len())])
                    }
                    1 => Term::existential(["u", "v"][rng.gen_range(0..2)]),
                    _ => Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]),
                })
                .collect();
            head.push(Atom::new(pred, args));
        }
        rules.push(Rule::new(format!("g{i}"), body, head).unwrap());
    }
    let database = random_fact_set(rng, 5);
    KnowledgeBase::new(RuleSet::new(rules).unwrap(), database).unwrap()
}

/// A random 3-rule KB whose existential heads feed strictly upward through
/// predicate levels L0 -> L1 -> L2 -> L3, so every chase variant saturates.
pub fn random_stratified_kb(rng: &mut ChaCha8Rng) -> KnowledgeBase {
    let level_pred = |level: usize| format!("L{level}");
    let mut rules = Vec::new();
    for level in 0..3 {
        let body = vec![Atom::new(
            level_pred(level),
            vec![Term::universal("x"), Term::universal("y")],
        )];
        let mut head_args = Vec::new();
        for slot in 0..2 {
            head_args.push(match rng.gen_range(0..3) {
                0 => Term::universal(["x", "y"][slot]),
                1 => Term::existential("v"),
                _ => Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]),
            });
        }
        let head = vec![Atom::new(level_pred(level + 1), head_args)];
        rules.push(Rule::new(format!("s{level}"), body, head).unwrap());
    }
    let mut database = FactSet::new();
    for _ in 0..rng.gen_range(1..=3) {
        database
            .insert(Atom::new(
                level_pred(0),
                vec![
                    Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]),
                    Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]),
                ],
            ))
            .unwrap();
    }
    KnowledgeBase::new(RuleSet::new(rules).unwrap(), database).unwrap()
}

/// Every assignment of `vars` to terms of the fact set, extending `base`.
fn assignments(
    vars: &[String],
    universe: &[Term],
    base: &Substitution,
) -> Vec<Substitution> {
    let mut out = vec![base.clone()];
    for var in vars {
        let mut grown = Vec::new();
        for sub in &out {
            for term in universe {
                let mut extended = sub.clone();
                extended.bind(var.clone(), term.clone()).unwrap();
                grown.push(extended);
            }
        }
        out = grown;
    }
    out
}

/// The naive matching oracle: try every assignment of the pattern's unbound
/// variables to terms of the fact set and keep those embedding the pattern.
pub fn naive_homomorphisms(
    pattern: &[Atom],
    facts: &FactSet,
    partial: &Substitution,
) -> Vec<Substitution> {
    let mut vars: Vec<String> = Vec::new();
    for atom in pattern {
        for (name, _) in atom.variables() {
            if partial.get(name).is_none() && !vars.iter().any(|v| v == name) {
                vars.push(name.to_string());
            }
        }
    }
    let universe: Vec<Term> = facts.terms().into_iter().collect();
    let mut out: Vec<Substitution> = assignments(&vars, &universe, partial)
        .into_iter()
        .filter(|sub| sub.apply(pattern).iter().all(|a| facts.contains(a)))
        .collect();
    out.sort();
    out.dedup();
    out
}
