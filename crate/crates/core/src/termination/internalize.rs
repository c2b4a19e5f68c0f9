//! Database internalization: fold a KB's database into its rule set.
//!
//! Every predicate P is renamed to a fresh primed predicate, the primed
//! database facts are added to every rule body, and one empty-body rule
//! deriving the primed database is appended. Chase derivations of the
//! original KB then correspond one-to-one to derivations of the new rule
//! set over any database, after the single initialization step.

use thiserror::Error;

use crate::model::{Atom, KnowledgeBase, ModelError, Rule};

pub const INIT_RULE_ID: &str = "db_init";

#[derive(Debug, Error)]
pub enum InternalizeError {
    #[error("an empty database would give the added rule an empty head")]
    EmptyDatabase,
    #[error("a rule id {0} already exists; cannot add the database rule")]
    InitIdTaken(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The primed name of a predicate.
pub fn primed_predicate(name: &str) -> String {
    format!("{name}_p")
}

fn prime_atom(atom: &Atom) -> Atom {
    Atom::new(primed_predicate(&atom.predicate), atom.args.clone())
}

/// Returns the internalized rule set: the original rules primed and
/// extended with the primed database in their bodies, plus the
/// `db_init` rule deriving the primed database from nothing.
pub fn internalize(kb: &KnowledgeBase) -> Result<Vec<Rule>, InternalizeError> {
    if kb.database.is_empty() {
        return Err(InternalizeError::EmptyDatabase);
    }
    if kb.rules.get(INIT_RULE_ID).is_some() {
        return Err(InternalizeError::InitIdTaken(INIT_RULE_ID.into()));
    }
    let db_atoms: Vec<Atom> = kb.database.iter().map(prime_atom).collect();
    let mut out = Vec::new();
    for rule in kb.rules.iter() {
        let mut body: Vec<Atom> = rule.body.iter().map(prime_atom).collect();
        for fact in &db_atoms {
            if !body.contains(fact) {
                body.push(fact.clone());
            }
        }
        let head: Vec<Atom> = rule.head.iter().map(prime_atom).collect();
        out.push(Rule::new(rule.id(), body, head)?);
    }
    out.push(Rule::new(INIT_RULE_ID, Vec::new(), db_atoms)?);
    Ok(out)
}
