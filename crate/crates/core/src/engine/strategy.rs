//! Trigger-selection strategies.
//!
//! The chase semantics quantifies over all derivations; strategies realize
//! particular ones. Fifo keeps a discovery-ordered queue, re-checks
//! obsolescence at dequeue and drops obsolete entries without consuming a
//! chase step. That skip is what makes Fifo derivations satisfy the
//! breadth-first condition: an entry loaded at F_i is preceded in the queue
//! only by triggers also loaded at F_i, each resolved in at most one step.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Derivation, EngineError, Status};
use crate::matching::{self, Trigger};
use crate::model::Term;

/// A trigger-selection strategy for one run.
#[derive(Debug, Clone)]
pub enum Strategy {
    /// Apply the longest-waiting active trigger (discovery order).
    Fifo,
    /// Follow the newest part of the structure: youngest null first,
    /// term-creating rules preferred.
    Dfs,
    /// Apply a uniformly chosen active trigger, seeded.
    Random { seed: u64 },
    /// Apply the listed triggers in order; each descriptor must resolve to
    /// an active trigger at its step.
    Script { steps: Vec<TriggerDescriptor> },
}

/// Identifies a trigger as (rule id, bindings on some of its universal
/// variables), resolved against the canonical active-trigger order. The
/// first active trigger consistent with all listed bindings is taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerDescriptor {
    pub rule_id: String,
    pub bindings: Vec<(String, Term)>,
}

impl TriggerDescriptor {
    pub fn new(rule_id: impl Into<String>, bindings: Vec<(String, Term)>) -> Self {
        TriggerDescriptor { rule_id: rule_id.into(), bindings }
    }

    pub fn matches(&self, trigger: &Trigger) -> bool {
        trigger.rule_id == self.rule_id
            && self
                .bindings
                .iter()
                .all(|(var, term)| trigger.sigma.get(var) == Some(term))
    }
}

pub(super) fn drive(
    d: &mut Derivation,
    strategy: Strategy,
    max_steps: usize,
) -> Result<(), EngineError> {
    match strategy {
        Strategy::Fifo => run_fifo(d, max_steps),
        Strategy::Dfs => run_dfs(d, max_steps),
        Strategy::Random { seed } => run_random(d, max_steps, seed),
        Strategy::Script { steps } => run_script(d, max_steps, &steps),
    }
}

fn active(d: &Derivation) -> Vec<Trigger> {
    matching::active_triggers(d.rules(), d.result())
}

fn run_fifo(d: &mut Derivation, max_steps: usize) -> Result<(), EngineError> {
    let mut seen: HashSet<Trigger> = HashSet::new();
    let mut pending: VecDeque<Trigger> = VecDeque::new();
    // Triggers already fired must not re-enter the queue after a resume.
    for record in d.steps() {
        seen.insert(record.trigger.clone());
    }
    let mut done = 0;
    loop {
        let current = active(d);
        if current.is_empty() {
            d.set_status(Status::Saturated);
            return Ok(());
        }
        if done == max_steps {
            d.set_status(Status::BudgetExhausted);
            return Ok(());
        }
        for trigger in current {
            if seen.insert(trigger.clone()) {
                pending.push_back(trigger);
            }
        }
        let chosen = loop {
            let Some(candidate) = pending.pop_front() else {
                unreachable!("an active trigger is always queued");
            };
            if !matching::is_obsolete(d.rules(), &candidate, d.result())? {
                break candidate;
            }
            // obsolete queue entries are dropped without consuming a step
        };
        d.chase_step(&chosen)?;
        done += 1;
    }
}

/// The step at which each null first appeared.
fn null_births(d: &Derivation) -> HashMap<Term, usize> {
    let mut births = HashMap::new();
    for (step, record) in d.steps().iter().enumerate() {
        for atom in &record.new_facts {
            for arg in &atom.args {
                if arg.is_null() {
                    births.entry(arg.clone()).or_insert(step);
                }
            }
        }
    }
    births
}

/// Dfs follows the newest part of the structure: it picks the trigger whose
/// substitution touches the youngest null, preferring triggers of rules
/// with existential variables (the ones that deepen the structure), and
/// falls back to canonical order.
fn run_dfs(d: &mut Derivation, max_steps: usize) -> Result<(), EngineError> {
    let mut done = 0;
    loop {
        let current = active(d);
        if current.is_empty() {
            d.set_status(Status::Saturated);
            return Ok(());
        }
        if done == max_steps {
            d.set_status(Status::BudgetExhausted);
            return Ok(());
        }
        let births = null_births(d);
        let chosen = current
            .iter()
            .enumerate()
            .max_by_key(|(pos, t)| {
                let newest: i64 = t
                    .sigma
                    .iter()
                    .filter_map(|(_, term)| births.get(term))
                    .map(|&b| b as i64)
                    .max()
                    .unwrap_or(-1);
                let creates = d
                    .rules()
                    .get(&t.rule_id)
                    .map(|r| r.existentials().len())
                    .unwrap_or(0);
                (newest, creates, std::cmp::Reverse(*pos))
            })
            .map(|(_, t)| t.clone())
            .expect("active is non-empty");
        d.chase_step(&chosen)?;
        done += 1;
    }
}

fn run_random(d: &mut Derivation, max_steps: usize, seed: u64) -> Result<(), EngineError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    loop {
        let current = active(d);
        if current.is_empty() {
            d.set_status(Status::Saturated);
            return Ok(());
        }
        if done == max_steps {
            d.set_status(Status::BudgetExhausted);
            return Ok(());
        }
        let pick = rng.gen_range(0..current.len());
        d.chase_step(&current[pick])?;
        done += 1;
    }
}

fn run_script(
    d: &mut Derivation,
    max_steps: usize,
    steps: &[TriggerDescriptor],
) -> Result<(), EngineError> {
    for (index, descriptor) in steps.iter().enumerate() {
        let current = active(d);
        if current.is_empty() {
            d.set_status(Status::Saturated);
            return Ok(());
        }
        if index == max_steps {
            d.set_status(Status::BudgetExhausted);
            return Ok(());
        }
        let chosen = current
            .iter()
            .find(|t| descriptor.matches(t))
            .cloned()
            .ok_or_else(|| EngineError::ScriptStepUnresolved {
                index,
                rule_id: descriptor.rule_id.clone(),
            })?;
        d.chase_step(&chosen)?;
    }
    if active(d).is_empty() {
        d.set_status(Status::Saturated);
    } else {
        d.set_status(Status::ScriptExhausted);
    }
    Ok(())
}
