//! Existential rules and rule sets.

use std::collections::HashMap;
use std::fmt;

use super::{Atom, ModelError, Term, VarKind};

/// An existential rule `B -> exists z. H`.
///
/// The body may be empty; the head may not. Universal variables of the head
/// must all occur in the body (the frontier condition), and existential
/// variables occur only in the head. Bodies and heads are null-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    id: String,
    pub body: Vec<Atom>,
    pub head: Vec<Atom>,
    universals: Vec<String>,
    frontier: Vec<String>,
    existentials: Vec<String>,
}

impl Rule {
    pub fn new(
        id: impl Into<String>,
        body: Vec<Atom>,
        head: Vec<Atom>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        let invalid = |msg: String| ModelError::InvalidRule { rule: id.clone(), msg };

        if head.is_empty() {
            return Err(invalid("head must be non-empty".into()));
        }
        for atom in body.iter().chain(head.iter()) {
            if atom.args.iter().any(Term::is_null) {
                return Err(invalid(format!("nulls are not allowed in rules: {atom}")));
            }
        }

        let mut universals = Vec::new();
        for atom in &body {
            for (name, kind) in atom.variables() {
                if kind == VarKind::Existential {
                    return Err(invalid(format!(
                        "existential variable !{name} occurs in the body"
                    )));
                }
                if !universals.iter().any(|u| u == name) {
                    universals.push(name.to_string());
                }
            }
        }

        let mut frontier = Vec::new();
        let mut existentials = Vec::new();
        for atom in &head {
            for (name, kind) in atom.variables() {
                match kind {
                    VarKind::Universal => {
                        if !universals.iter().any(|u| u == name) {
                            return Err(invalid(format!(
                                "universal variable ?{name} occurs in the head \
                                 but not in the body; head-only variables must \
                                 be existential (!{name})"
                            )));
                        }
                        if !frontier.iter().any(|v| v == name) {
                            frontier.push(name.to_string());
                        }
                    }
                    VarKind::Existential => {
                        if !existentials.iter().any(|v| v == name) {
                            existentials.push(name.to_string());
                        }
                    }
                }
            }
        }

        Ok(Rule { id, body, head, universals, frontier, existentials })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Universal variables in order of first occurrence in the body.
    pub fn universals(&self) -> &[String] {
        &self.universals
    }

    /// Universal variables shared by body and head.
    pub fn frontier(&self) -> &[String] {
        &self.frontier
    }

    /// Existential variables, in order of first occurrence in the head.
    pub fn existentials(&self) -> &[String] {
        &self.existentials
    }

    pub fn is_datalog(&self) -> bool {
        self.existentials.is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.id)?;
        for (i, atom) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{atom}")?;
        }
        if !self.body.is_empty() {
            write!(f, " ")?;
        }
        write!(f, "-> ")?;
        for (i, atom) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{atom}")?;
        }
        write!(f, " .")
    }
}

/// A finite, ordered rule set with unique rule ids.
///
/// The order of rules is significant: it fixes the canonical trigger order
/// used by the engine and the explorer.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    rules: Vec<Rule>,
    by_id: HashMap<String, usize>,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Result<Self, ModelError> {
        let mut by_id = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            if by_id.insert(rule.id().to_string(), i).is_some() {
                return Err(ModelError::DuplicateRuleId(rule.id().to_string()));
            }
        }
        Ok(RuleSet { rules, by_id })
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.by_id.get(id).map(|&i| &self.rules[i])
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}
