//! Restricted and oblivious chase execution with provenance recording.
//!
//! A [`Derivation`] is a value: cloning yields an independent branch that
//! can be advanced separately. The restricted chase names fresh nulls
//! canonically as `n{step}_{position}` so that equal trigger choices yield
//! equal fact sets; the oblivious chase names them by skolemization so that
//! saturated results are order-independent as literal fact sets. The two
//! namers are never mixed in one derivation.

mod dagger;
mod export;
mod oblivious;
mod strategy;

pub use dagger::{check_dagger_violation, DaggerWitness};
pub use export::{write_dot, write_trace};
pub use oblivious::run_oblivious;
pub use strategy::{Strategy, TriggerDescriptor};

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::matching::{self, MatchError, Trigger};
use crate::model::{Atom, FactSet, KnowledgeBase, ModelError, RuleSet, Substitution, Term};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("trigger {0} is not loaded for the current fact set")]
    NotLoaded(Trigger),
    #[error("trigger {0} is obsolete for the current fact set")]
    Obsolete(Trigger),
    #[error("trigger {0} was already fired in this oblivious derivation")]
    AlreadyFired(Trigger),
    #[error("script step {index} ({rule_id}) resolves to no active trigger")]
    ScriptStepUnresolved { index: usize, rule_id: String },
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Terminal (or not) state of a derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// No chase step has ended the derivation yet.
    Running,
    /// No trigger is loaded and non-obsolete for the final fact set.
    Saturated,
    /// The step budget ran out with an active trigger still present.
    BudgetExhausted,
    /// A script ran out of entries before saturation.
    ScriptExhausted,
}

/// How fresh nulls are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullNamer {
    /// `n{step}_{position}`: reproducible across runs of the same script.
    Canonical,
    /// A function of (rule id, existential variable, frontier bindings):
    /// order-independent across strategies.
    Skolem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaseMode {
    /// Apply only loaded, non-obsolete triggers.
    Restricted,
    /// Apply every loaded trigger once, ignoring obsolescence.
    Oblivious,
}

/// One applied trigger: the full substitution (universals and the fresh
/// nulls chosen for existentials), the instantiated head, and which of those
/// atoms were new.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub trigger: Trigger,
    pub extension: Substitution,
    pub output: Vec<Atom>,
    pub new_facts: Vec<Atom>,
}

#[derive(Debug, Clone)]
pub struct Provenance<'a> {
    pub step: usize,
    pub support: Vec<Atom>,
    pub record: &'a StepRecord,
}

/// A restricted (or oblivious) chase derivation with provenance.
#[derive(Debug, Clone)]
pub struct Derivation {
    rules: Arc<RuleSet>,
    database: FactSet,
    current: FactSet,
    steps: Vec<StepRecord>,
    first_emitter: HashMap<Atom, usize>,
    status: Status,
    mode: ChaseMode,
}

impl Derivation {
    pub fn new(kb: &KnowledgeBase) -> Self {
        Derivation::with_mode(kb, ChaseMode::Restricted)
    }

    pub fn with_mode(kb: &KnowledgeBase, mode: ChaseMode) -> Self {
        Derivation {
            rules: Arc::new(kb.rules.clone()),
            database: kb.database.clone(),
            current: kb.database.clone(),
            steps: Vec::new(),
            first_emitter: HashMap::new(),
            status: Status::Running,
            mode,
        }
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn database(&self) -> &FactSet {
        &self.database
    }

    /// The final (current) fact set.
    pub fn result(&self) -> &FactSet {
        &self.current
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    /// Number of trigger applications so far.
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Length of the chase sequence F_0, ..., F_k as a count of fact sets;
    /// the database alone has length 1.
    pub fn sequence_len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn mode(&self) -> ChaseMode {
        self.mode
    }

    pub(crate) fn set_status(&mut self, status: Status) {
        self.status = status;
    }

    #[cfg(test)]
    pub(crate) fn result_mut_for_tests(&mut self) -> &mut FactSet {
        &mut self.current
    }

    /// The fact set F_k, for k between 0 (the database) and `step_count()`.
    pub fn fact_set_at(&self, k: usize) -> FactSet {
        let mut f = self.database.clone();
        for record in &self.steps[..k] {
            for atom in &record.new_facts {
                f.insert(atom.clone()).expect("recorded facts are ground");
            }
        }
        f
    }

    /// All fact sets F_0, ..., F_n of the derivation.
    pub fn fact_sets(&self) -> Vec<FactSet> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut f = self.database.clone();
        out.push(f.clone());
        for record in &self.steps {
            for atom in &record.new_facts {
                f.insert(atom.clone()).expect("recorded facts are ground");
            }
            out.push(f.clone());
        }
        out
    }

    /// Where a non-database fact came from: the step that introduced it and
    /// that trigger's support.
    pub fn provenance(&self, fact: &Atom) -> Option<Provenance<'_>> {
        let &step = self.first_emitter.get(fact)?;
        let record = &self.steps[step];
        let support = record
            .trigger
            .support(&self.rules)
            .expect("recorded triggers resolve");
        Some(Provenance { step, support, record })
    }

    /// Applies one active trigger (restricted mode) or one unfired loaded
    /// trigger (oblivious mode) and records the step.
    pub fn chase_step(&mut self, trigger: &Trigger) -> Result<(), EngineError> {
        if self.mode == ChaseMode::Oblivious && self.steps.iter().any(|s| &s.trigger == trigger) {
            return Err(EngineError::AlreadyFired(trigger.clone()));
        }
        let namer = match self.mode {
            ChaseMode::Restricted => NullNamer::Canonical,
            ChaseMode::Oblivious => NullNamer::Skolem,
        };
        let check_obsolete = self.mode == ChaseMode::Restricted;
        let (output, extension) = trigger_output_impl(
            &self.rules,
            trigger,
            &self.current,
            namer,
            self.steps.len(),
            check_obsolete,
        )?;
        let mut new_facts = Vec::new();
        for atom in &output {
            if self.current.insert(atom.clone())? {
                new_facts.push(atom.clone());
                self.first_emitter.insert(atom.clone(), self.steps.len());
            }
        }
        self.steps.push(StepRecord {
            trigger: trigger.clone(),
            extension,
            output,
            new_facts,
        });
        Ok(())
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

fn fresh_null(namer: NullNamer, rule_id: &str, var: &str, pos: usize, step: usize, frontier_bindings: &[(String, Term)]) -> Term {
    match namer {
        NullNamer::Canonical => Term::null(format!("n{step}_{pos}")),
        NullNamer::Skolem => {
            let mut key = String::new();
            key.push_str(rule_id);
            key.push('\u{1}');
            key.push_str(var);
            for (v, t) in frontier_bindings {
                key.push('\u{2}');
                key.push_str(v);
                key.push('\u{3}');
                key.push_str(&t.to_string());
            }
            Term::null(format!("sk_{}_{}_{:016x}", rule_id, var, fnv1a64(key.as_bytes())))
        }
    }
}

fn trigger_output_impl(
    rules: &RuleSet,
    trigger: &Trigger,
    facts: &FactSet,
    namer: NullNamer,
    step: usize,
    check_obsolete: bool,
) -> Result<(Vec<Atom>, Substitution), EngineError> {
    if !matching::is_loaded(rules, trigger, facts)? {
        return Err(EngineError::NotLoaded(trigger.clone()));
    }
    if check_obsolete && matching::is_obsolete(rules, trigger, facts)? {
        return Err(EngineError::Obsolete(trigger.clone()));
    }
    let rule = rules.get(&trigger.rule_id).expect("loaded trigger resolves");
    let mut extension = trigger.sigma.clone();
    let frontier_bindings: Vec<(String, Term)> = rule
        .frontier()
        .iter()
        .map(|v| (v.clone(), trigger.sigma.get(v).expect("sigma total").clone()))
        .collect();
    for (pos, var) in rule.existentials().iter().enumerate() {
        let null = fresh_null(namer, rule.id(), var, pos, step, &frontier_bindings);
        extension.bind(var.clone(), null)?;
    }
    let mut output = Vec::new();
    for atom in extension.apply(&rule.head) {
        if !output.contains(&atom) {
            output.push(atom);
        }
    }
    Ok((output, extension))
}

/// Instantiates the head of an active trigger, mapping every existential
/// variable to a fresh null. Fails distinctly when the trigger is not
/// loaded or already obsolete.
pub fn trigger_output(
    rules: &RuleSet,
    trigger: &Trigger,
    facts: &FactSet,
    namer: NullNamer,
    step: usize,
) -> Result<Vec<Atom>, EngineError> {
    trigger_output_impl(rules, trigger, facts, namer, step, true).map(|(out, _)| out)
}

/// Runs a restricted chase derivation from the database under the given
/// strategy, for at most `max_steps` trigger applications.
pub fn run_chase(
    kb: &KnowledgeBase,
    strategy: Strategy,
    max_steps: usize,
) -> Result<Derivation, EngineError> {
    let mut d = Derivation::new(kb);
    continue_chase(&mut d, strategy, max_steps)?;
    Ok(d)
}

/// Advances an existing derivation by at most `max_steps` further trigger
/// applications. Used to run a script and then clean up with Fifo.
pub fn continue_chase(
    d: &mut Derivation,
    strategy: Strategy,
    max_steps: usize,
) -> Result<(), EngineError> {
    d.set_status(Status::Running);
    strategy::drive(d, strategy, max_steps)
}
