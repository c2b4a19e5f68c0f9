//! The breadth-first universal-termination semi-decider.
//!
//! Round i holds the set P_i of all length-i chase derivation prefixes that
//! do not yet violate the breadth-first condition. C_i extends every
//! surviving prefix by one fact set in every possible way; prefixes are
//! deduplicated only when literally equal (canonical null naming makes
//! identical choice sequences collide). Accepting at round i means every
//! breadth-first derivation has length below i.

use std::collections::HashSet;

use crate::engine::{check_dagger_violation, Derivation};
use crate::matching;
use crate::model::KnowledgeBase;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The prefix set P_round was empty.
    AcceptedAt { round: usize },
    Undecided {
        rounds: usize,
        /// The frontier cap was hit before the round budget.
        resource_exceeded: bool,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    /// Cap on |C_i|; exceeding it returns Undecided with the resource flag
    /// instead of an unbounded blow-up.
    pub max_frontier: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { max_frontier: 200_000 }
    }
}

/// A literal fingerprint of a derivation prefix: the new facts of every
/// step, in order. Two prefixes print equal iff their fact-set sequences
/// are equal.
fn fingerprint(d: &Derivation) -> Vec<String> {
    d.steps()
        .iter()
        .map(|record| {
            let mut new: Vec<String> = record.new_facts.iter().map(|a| a.to_string()).collect();
            new.sort();
            new.join(";")
        })
        .collect()
}

/// Runs the four-step semi-decision procedure for at most `max_rounds`
/// rounds. Round 1 holds the one-element list [D].
pub fn decide_bf(kb: &KnowledgeBase, max_rounds: usize, options: DecideOptions) -> Verdict {
    let mut survivors = vec![Derivation::new(kb)];
    for round in 2..=max_rounds {
        let mut extensions: Vec<Derivation> = Vec::new();
        let mut seen: HashSet<Vec<String>> = HashSet::new();
        for prefix in &survivors {
            for trigger in matching::active_triggers(prefix.rules(), prefix.result()) {
                let mut child = prefix.clone();
                child.chase_step(&trigger).expect("active trigger applies");
                if extensions.len() >= options.max_frontier {
                    return Verdict::Undecided { rounds: round, resource_exceeded: true };
                }
                if seen.insert(fingerprint(&child)) {
                    extensions.push(child);
                }
            }
        }
        // Drop every prefix with a breadth-first violation witness.
        extensions.retain(|d| check_dagger_violation(d).is_none());
        if extensions.is_empty() {
            return Verdict::AcceptedAt { round };
        }
        survivors = extensions;
    }
    Verdict::Undecided { rounds: max_rounds, resource_exceeded: false }
}
