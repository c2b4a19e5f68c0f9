//! Indexed sets of ground atoms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::{Atom, ModelError, Term};

/// A set of ground atoms over constants and nulls, indexed by predicate name
/// and by (predicate, argument position, term).
///
/// Iteration order is deterministic (lexicographic on atoms).
#[derive(Debug, Clone, Default)]
pub struct FactSet {
    facts: BTreeSet<Atom>,
    by_pred: HashMap<String, BTreeSet<Atom>>,
    by_pos: HashMap<(String, usize, Term), BTreeSet<Atom>>,
}

impl FactSet {
    pub fn new() -> Self {
        FactSet::default()
    }

    pub fn from_atoms<I: IntoIterator<Item = Atom>>(atoms: I) -> Result<Self, ModelError> {
        let mut set = FactSet::new();
        for atom in atoms {
            set.insert(atom)?;
        }
        Ok(set)
    }

    /// Inserts a ground atom. Returns whether the atom was new.
    pub fn insert(&mut self, atom: Atom) -> Result<bool, ModelError> {
        if !atom.is_ground() {
            return Err(ModelError::NonGroundFact(atom));
        }
        if !self.facts.insert(atom.clone()) {
            return Ok(false);
        }
        self.by_pred.entry(atom.predicate.clone()).or_default().insert(atom.clone());
        for (pos, term) in atom.args.iter().enumerate() {
            self.by_pos
                .entry((atom.predicate.clone(), pos, term.clone()))
                .or_default()
                .insert(atom.clone());
        }
        Ok(true)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.facts.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.facts.iter()
    }

    /// All facts with the given predicate name.
    pub fn with_predicate(&self, predicate: &str) -> impl Iterator<Item = &Atom> {
        self.by_pred.get(predicate).into_iter().flatten()
    }

    pub fn count_predicate(&self, predicate: &str) -> usize {
        self.by_pred.get(predicate).map_or(0, BTreeSet::len)
    }

    /// All facts carrying `term` at argument position `pos` of `predicate`.
    pub fn with_term_at(
        &self,
        predicate: &str,
        pos: usize,
        term: &Term,
    ) -> impl Iterator<Item = &Atom> {
        self.by_pos
            .get(&(predicate.to_string(), pos, term.clone()))
            .into_iter()
            .flatten()
    }

    pub fn count_term_at(&self, predicate: &str, pos: usize, term: &Term) -> usize {
        self.by_pos
            .get(&(predicate.to_string(), pos, term.clone()))
            .map_or(0, BTreeSet::len)
    }

    /// All terms occurring in the set, deduplicated and ordered.
    pub fn terms(&self) -> BTreeSet<Term> {
        self.facts.iter().flat_map(|a| a.args.iter().cloned()).collect()
    }

    pub fn nulls(&self) -> BTreeSet<Term> {
        self.terms().into_iter().filter(Term::is_null).collect()
    }

    pub fn contains_term(&self, term: &Term) -> bool {
        self.facts.iter().any(|a| a.args.contains(term))
    }

    pub fn union_with(&mut self, other: &FactSet) -> Result<(), ModelError> {
        for atom in other.iter() {
            self.insert(atom.clone())?;
        }
        Ok(())
    }

    pub fn is_subset_of(&self, other: &FactSet) -> bool {
        self.facts.is_subset(&other.facts)
    }

    /// Lexicographically sorted textual form, one fact per line, each
    /// terminated by `.`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for fact in &self.facts {
            out.push_str(&fact.to_string());
            out.push_str(".\n");
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn indexes_agree(&self) -> bool {
        let by_pred_ok = self.by_pred.values().flatten().all(|a| self.facts.contains(a))
            && self
                .facts
                .iter()
                .all(|a| self.by_pred.get(&a.predicate).is_some_and(|s| s.contains(a)));
        let by_pos_ok = self.by_pos.values().flatten().all(|a| self.facts.contains(a))
            && self.facts.iter().all(|a| {
                a.args.iter().enumerate().all(|(pos, term)| {
                    self.by_pos
                        .get(&(a.predicate.clone(), pos, term.clone()))
                        .is_some_and(|s| s.contains(a))
                })
            });
        by_pred_ok && by_pos_ok
    }
}

impl PartialEq for FactSet {
    fn eq(&self, other: &Self) -> bool {
        self.facts == other.facts
    }
}

impl Eq for FactSet {}

impl fmt::Display for FactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, fact) in self.facts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{fact}")?;
        }
        write!(f, "}}")
    }
}
