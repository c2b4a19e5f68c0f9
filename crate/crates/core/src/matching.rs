//! Conjunctive matching of rule bodies into fact sets, and the
//! loaded/obsolete/active trigger tests built on top of it.
//!
//! The matcher is a backtracking join that always extends the most selective
//! unmatched atom next, using the (predicate, position, term) index of the
//! fact set. Semantics, not speed, is the contract here; the test suite
//! keeps a naive generate-and-test oracle around to hold it to that.

use thiserror::Error;

use crate::model::{Atom, FactSet, Rule, RuleSet, Substitution, Term};

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("unknown rule id {0}")]
    UnknownRule(String),
    #[error("trigger substitution for rule {rule} must bind exactly its universal variables")]
    BadTriggerDomain { rule: String },
}

/// A (rule, substitution) pair. The substitution is total on the rule's
/// universal variables and defined on nothing else.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trigger {
    pub rule_id: String,
    pub sigma: Substitution,
}

impl Trigger {
    pub fn new(rule_id: impl Into<String>, sigma: Substitution) -> Self {
        Trigger { rule_id: rule_id.into(), sigma }
    }

    /// The instantiated body of the trigger's rule.
    pub fn support(&self, rules: &RuleSet) -> Result<Vec<Atom>, MatchError> {
        let rule = resolve(rules, self)?;
        Ok(self.sigma.apply(&rule.body))
    }
}

impl std::fmt::Display for Trigger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{},{}>", self.rule_id, self.sigma)
    }
}

fn resolve<'a>(rules: &'a RuleSet, trigger: &Trigger) -> Result<&'a Rule, MatchError> {
    let rule = rules
        .get(&trigger.rule_id)
        .ok_or_else(|| MatchError::UnknownRule(trigger.rule_id.clone()))?;
    let domain: Vec<&str> = trigger.sigma.domain().collect();
    let ok = domain.len() == rule.universals().len()
        && rule.universals().iter().all(|u| trigger.sigma.get(u).is_some());
    if !ok {
        return Err(MatchError::BadTriggerDomain { rule: rule.id().to_string() });
    }
    Ok(rule)
}

/// How many candidate facts the index offers for `atom` under `sub`.
fn selectivity(atom: &Atom, facts: &FactSet, sub: &Substitution) -> usize {
    let mut best = facts.count_predicate(&atom.predicate);
    for (pos, term) in atom.args.iter().enumerate() {
        let bound = match term {
            Term::Variable { name, .. } => sub.get(name).cloned(),
            ground => Some(ground.clone()),
        };
        if let Some(t) = bound {
            best = best.min(facts.count_term_at(&atom.predicate, pos, &t));
        }
    }
    best
}

fn unify_atom(pattern: &Atom, fact: &Atom, sub: &Substitution) -> Option<Substitution> {
    if pattern.predicate != fact.predicate || pattern.arity() != fact.arity() {
        return None;
    }
    let mut out = sub.clone();
    for (pat, val) in pattern.args.iter().zip(fact.args.iter()) {
        match pat {
            Term::Variable { name, .. } => match out.get(name) {
                Some(existing) if existing == val => {}
                Some(_) => return None,
                None => out.bind(name.clone(), val.clone()).ok()?,
            },
            ground => {
                if ground != val {
                    return None;
                }
            }
        }
    }
    Some(out)
}

fn join(pattern: &[Atom], facts: &FactSet, sub: Substitution, out: &mut Vec<Substitution>) {
    if pattern.is_empty() {
        out.push(sub);
        return;
    }
    // Most selective atom first.
    let (pick, _) = pattern
        .iter()
        .enumerate()
        .map(|(i, a)| (i, selectivity(a, facts, &sub)))
        .min_by_key(|&(_, s)| s)
        .expect("non-empty pattern");
    let atom = &pattern[pick];
    let rest: Vec<Atom> = pattern
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pick)
        .map(|(_, a)| a.clone())
        .collect();

    // Scan the narrowest index available for the picked atom.
    let mut narrowed: Option<(usize, Term)> = None;
    let mut best = usize::MAX;
    for (pos, term) in atom.args.iter().enumerate() {
        let bound = match term {
            Term::Variable { name, .. } => sub.get(name).cloned(),
            ground => Some(ground.clone()),
        };
        if let Some(t) = bound {
            let count = facts.count_term_at(&atom.predicate, pos, &t);
            if count < best {
                best = count;
                narrowed = Some((pos, t));
            }
        }
    }
    let candidates: Vec<&Atom> = match narrowed {
        Some((pos, term)) => facts.with_term_at(&atom.predicate, pos, &term).collect(),
        None => facts.with_predicate(&atom.predicate).collect(),
    };
    for fact in candidates {
        if let Some(extended) = unify_atom(atom, fact, &sub) {
            join(&rest, facts, extended, out);
        }
    }
}

/// All substitutions extending `partial` under which the instantiated
/// pattern is a subset of `facts`.
///
/// The result is deterministic: lexicographic by variable binding.
pub fn find_homomorphisms(
    pattern: &[Atom],
    facts: &FactSet,
    partial: &Substitution,
) -> Vec<Substitution> {
    let mut out = Vec::new();
    join(pattern, facts, partial.clone(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// True iff the trigger's support is included in `facts`.
pub fn is_loaded(rules: &RuleSet, trigger: &Trigger, facts: &FactSet) -> Result<bool, MatchError> {
    let rule = resolve(rules, trigger)?;
    Ok(trigger.sigma.apply(&rule.body).iter().all(|a| facts.contains(a)))
}

/// True iff some extension of the trigger's substitution to the rule's
/// existential variables maps the head into `facts`.
pub fn is_obsolete(rules: &RuleSet, trigger: &Trigger, facts: &FactSet) -> Result<bool, MatchError> {
    let rule = resolve(rules, trigger)?;
    Ok(!find_homomorphisms(&rule.head, facts, &trigger.sigma).is_empty())
}

/// The triggers that are loaded and not obsolete for `facts`, in canonical
/// order: rules in rule-set order, then substitutions in lexicographic
/// binding order.
pub fn active_triggers(rules: &RuleSet, facts: &FactSet) -> Vec<Trigger> {
    let mut out = Vec::new();
    for rule in rules.iter() {
        for sigma in find_homomorphisms(&rule.body, facts, &Substitution::new()) {
            let trigger = Trigger::new(rule.id(), sigma);
            let obsolete = is_obsolete(rules, &trigger, facts).expect("trigger built from rule");
            if !obsolete {
                out.push(trigger);
            }
        }
    }
    out
}
