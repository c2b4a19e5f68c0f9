//! Core vocabulary: terms, atoms, rules, fact sets, knowledge bases,
//! substitutions, and the textual rule/fact languages.
//!
//! All values here are immutable after construction and safe to share or
//! copy across concurrent workers.

mod fact_set;
mod iso;
mod parser;
mod rule;

pub use fact_set::FactSet;
pub use iso::isomorphic_eq;
pub use parser::{parse_atom, parse_fact_set, parse_facts, parse_rules, ParseError};
pub use rule::{Rule, RuleSet};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("rule {rule}: {msg}")]
    InvalidRule { rule: String, msg: String },
    #[error("fact sets hold ground atoms only, got {0}")]
    NonGroundFact(Atom),
    #[error("database must be null-free, got {0}")]
    NullInDatabase(Atom),
    #[error("predicate {name} used with arities {first} and {second}")]
    ArityConflict { name: String, first: usize, second: usize },
    #[error("substitution maps variables to constants or nulls, got {0}")]
    VariableInSubstitution(Term),
    #[error("duplicate rule id {0}")]
    DuplicateRuleId(String),
}

/// Whether a rule variable is universally or existentially quantified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Universal,
    Existential,
}

/// A term: a constant, a labelled null, or a rule variable.
///
/// Variables occur only inside rules; fact sets contain only constants and
/// nulls. Null ids are globally unique within one derivation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(String),
    Null(String),
    Variable { name: String, kind: VarKind },
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Constant(name.into())
    }

    pub fn null(id: impl Into<String>) -> Self {
        Term::Null(id.into())
    }

    pub fn universal(name: impl Into<String>) -> Self {
        Term::Variable { name: name.into(), kind: VarKind::Universal }
    }

    pub fn existential(name: impl Into<String>) -> Self {
        Term::Variable { name: name.into(), kind: VarKind::Existential }
    }

    pub fn is_ground(&self) -> bool {
        !matches!(self, Term::Variable { .. })
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Term::Null(_))
    }

    pub fn as_variable(&self) -> Option<(&str, VarKind)> {
        match self {
            Term::Variable { name, kind } => Some((name, *kind)),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(name) => write!(f, "{name}"),
            Term::Null(id) => write!(f, "_:{id}"),
            Term::Variable { name, kind: VarKind::Universal } => write!(f, "?{name}"),
            Term::Variable { name, kind: VarKind::Existential } => write!(f, "!{name}"),
        }
    }
}

/// An atom `P(t1, ..., tn)`. The arity of a predicate is fixed by use:
/// every occurrence of a predicate name must carry the same argument count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Variables of the atom in order of first occurrence.
    pub fn variables(&self) -> Vec<(&str, VarKind)> {
        let mut seen = Vec::new();
        for term in &self.args {
            if let Some((name, kind)) = term.as_variable() {
                if !seen.iter().any(|(n, _)| *n == name) {
                    seen.push((name, kind));
                }
            }
        }
        seen
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, arg) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{arg}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A partial mapping from variable names to constants or nulls.
///
/// A trigger's substitution is defined exactly on the universal variables
/// of its rule.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    /// Binds `var` to a ground term. Rejects variables as values.
    pub fn bind(&mut self, var: impl Into<String>, term: Term) -> Result<(), ModelError> {
        if !term.is_ground() {
            return Err(ModelError::VariableInSubstitution(term));
        }
        self.map.insert(var.into(), term);
        Ok(())
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply_to_term(&self, term: &Term) -> Term {
        match term {
            Term::Variable { name, .. } => match self.map.get(name) {
                Some(value) => value.clone(),
                None => term.clone(),
            },
            other => other.clone(),
        }
    }

    pub fn apply_to_atom(&self, atom: &Atom) -> Atom {
        Atom {
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(|t| self.apply_to_term(t)).collect(),
        }
    }

    pub fn apply(&self, atoms: &[Atom]) -> Vec<Atom> {
        atoms.iter().map(|a| self.apply_to_atom(a)).collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (var, term)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{var}->{term}")?;
        }
        write!(f, "}}")
    }
}

/// Replaces every occurrence of a mapped variable; unmapped variables are
/// left untouched.
pub fn apply_substitution(s: &Substitution, atoms: &[Atom]) -> Vec<Atom> {
    s.apply(atoms)
}

/// A finite rule set paired with a null-free database.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub rules: RuleSet,
    pub database: FactSet,
}

impl KnowledgeBase {
    /// Checks that the database is null-free and that predicate arities are
    /// consistent across rules and database.
    pub fn new(rules: RuleSet, database: FactSet) -> Result<Self, ModelError> {
        for fact in database.iter() {
            if fact.args.iter().any(Term::is_null) {
                return Err(ModelError::NullInDatabase(fact.clone()));
            }
        }
        let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
        let atoms = rules
            .iter()
            .flat_map(|r| r.body.iter().chain(r.head.iter()))
            .chain(database.iter());
        for atom in atoms {
            match arities.get(atom.predicate.as_str()) {
                Some(&arity) if arity != atom.arity() => {
                    return Err(ModelError::ArityConflict {
                        name: atom.predicate.clone(),
                        first: arity,
                        second: atom.arity(),
                    });
                }
                Some(_) => {}
                None => {
                    arities.insert(&atom.predicate, atom.arity());
                }
            }
        }
        Ok(KnowledgeBase { rules, database })
    }
}
