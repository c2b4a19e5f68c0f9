//! Finite-prefix checking of the breadth-first condition.
//!
//! Fairness of an infinite derivation is not checkable; what is finitely
//! verifiable is a violation witness on a prefix: a trigger loaded at F_k,
//! still not obsolete for the final fact set F_i, with i - k larger than the
//! number of triggers loaded and not obsolete for F_k.

use super::Derivation;
use crate::matching::{self, Trigger};

/// The earliest prefix witness against the breadth-first condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaggerWitness {
    /// The step index k at which the trigger was loaded (0 is the database).
    pub step: usize,
    pub trigger: Trigger,
    /// How many triggers were loaded and not obsolete for F_k.
    pub active_at_step: usize,
}

/// Returns the earliest witness (k, trigger) violating the breadth-first
/// condition on this derivation, or `None` if no prefix violation exists.
pub fn check_dagger_violation(d: &Derivation) -> Option<DaggerWitness> {
    let final_index = d.step_count();
    let final_facts = d.result();
    let mut facts = d.database().clone();
    for k in 0..=final_index {
        if k > 0 {
            for atom in &d.steps()[k - 1].new_facts {
                facts.insert(atom.clone()).expect("recorded facts are ground");
            }
        }
        // Triggers obsolete at F_k stay obsolete, so candidates loaded at F_k
        // that are still live at the end are exactly the active ones.
        let active = matching::active_triggers(d.rules(), &facts);
        let count = active.len();
        if final_index - k <= count {
            continue;
        }
        for trigger in active {
            let obsolete = matching::is_obsolete(d.rules(), &trigger, final_facts)
                .expect("trigger built from rule");
            if !obsolete {
                return Some(DaggerWitness { step: k, trigger, active_at_step: count });
            }
        }
    }
    None
}
