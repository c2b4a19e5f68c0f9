//! The oblivious chase: every loaded trigger fires at most once and the
//! obsolescence check is dropped.
//!
//! Fresh nulls are skolem-named, so for a KB whose oblivious chase saturates
//! within budget, any two strategies produce literally identical final fact
//! sets, not merely isomorphic ones.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ChaseMode, Derivation, EngineError, Status, Strategy};
use crate::matching::{self, Trigger};
use crate::model::{KnowledgeBase, Substitution};

/// Loaded triggers that have not fired yet, in canonical order.
fn pending_triggers(d: &Derivation, fired: &HashSet<Trigger>) -> Vec<Trigger> {
    let mut out = Vec::new();
    for rule in d.rules().iter() {
        for sigma in matching::find_homomorphisms(&rule.body, d.result(), &Substitution::new()) {
            let trigger = Trigger::new(rule.id(), sigma);
            if !fired.contains(&trigger) {
                out.push(trigger);
            }
        }
    }
    out
}

/// Runs an oblivious chase derivation under the given strategy.
pub fn run_oblivious(
    kb: &KnowledgeBase,
    strategy: Strategy,
    max_steps: usize,
) -> Result<Derivation, EngineError> {
    let mut d = Derivation::with_mode(kb, ChaseMode::Oblivious);
    let mut fired: HashSet<Trigger> = HashSet::new();
    let mut done = 0;

    match strategy {
        Strategy::Fifo | Strategy::Dfs => {
            let newest_first = matches!(strategy, Strategy::Dfs);
            let mut seen: HashSet<Trigger> = HashSet::new();
            let mut queue: VecDeque<Trigger> = VecDeque::new();
            loop {
                let pending = pending_triggers(&d, &fired);
                if pending.is_empty() {
                    d.set_status(Status::Saturated);
                    return Ok(d);
                }
                if done == max_steps {
                    d.set_status(Status::BudgetExhausted);
                    return Ok(d);
                }
                for t in pending {
                    if seen.insert(t.clone()) {
                        queue.push_back(t);
                    }
                }
                let chosen = if newest_first {
                    queue.pop_back()
                } else {
                    queue.pop_front()
                }
                .expect("a pending trigger is always queued");
                fired.insert(chosen.clone());
                d.chase_step(&chosen)?;
                done += 1;
            }
        }
        Strategy::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            loop {
                let pending = pending_triggers(&d, &fired);
                if pending.is_empty() {
                    d.set_status(Status::Saturated);
                    return Ok(d);
                }
                if done == max_steps {
                    d.set_status(Status::BudgetExhausted);
                    return Ok(d);
                }
                let chosen = pending[rng.gen_range(0..pending.len())].clone();
                fired.insert(chosen.clone());
                d.chase_step(&chosen)?;
                done += 1;
            }
        }
        Strategy::Script { steps } => {
            for (index, descriptor) in steps.iter().enumerate() {
                let pending = pending_triggers(&d, &fired);
                if pending.is_empty() {
                    d.set_status(Status::Saturated);
                    return Ok(d);
                }
                if done == max_steps {
                    d.set_status(Status::BudgetExhausted);
                    return Ok(d);
                }
                let chosen = pending
                    .iter()
                    .find(|t| descriptor.matches(t))
                    .cloned()
                    .ok_or_else(|| EngineError::ScriptStepUnresolved {
                        index,
                        rule_id: descriptor.rule_id.clone(),
                    })?;
                fired.insert(chosen.clone());
                d.chase_step(&chosen)?;
                done += 1;
            }
            if pending_triggers(&d, &fired).is_empty() {
                d.set_status(Status::Saturated);
            } else {
                d.set_status(Status::ScriptExhausted);
            }
            Ok(d)
        }
    }
}
