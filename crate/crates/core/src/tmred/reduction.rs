//! Compilation of a machine into an existential rule set, and the encoding
//! of configurations as databases.
//!
//! Letter and state predicates are namespaced (`Sym_0`, `St_q0`) to avoid
//! collisions with the fixed predicates `F`, `R`, `C_L`, `C_R`, `Real`,
//! `Brake`, `End`, `NextBr`. `brSet(x,w)` is notation, not a predicate: it
//! expands to the four atoms `F(x,w,w)`, `R(x,w,w)`, `Real(x)`, `Brake(w)`
//! at compile and encode time. Rule ids and constants are named
//! deterministically so compiled output is byte-stable.

use std::collections::HashMap;

use super::{Configuration, DeltaEntry, Dir, Machine, TapeSymbol, TmError};
use crate::model::{Atom, FactSet, Rule, RuleSet, Term};

pub const PRED_F: &str = "F";
pub const PRED_R: &str = "R";
pub const PRED_CL: &str = "C_L";
pub const PRED_CR: &str = "C_R";
pub const PRED_REAL: &str = "Real";
pub const PRED_BRAKE: &str = "Brake";
pub const PRED_END: &str = "End";
pub const PRED_NEXT_BR: &str = "NextBr";

/// Why a compiled rule exists; used to interpret derivations back in
/// machine terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOrigin {
    Brake,
    NextBrake,
    /// A head-move rule for `entry`, specialised to the letter `right_letter`
    /// carried by the cell the new head position is copied from.
    Transition { entry: DeltaEntry, right_letter: TapeSymbol },
    CopyRight(TapeSymbol),
    CopyLeft(TapeSymbol),
    End,
}

/// A compiled machine: the rule set together with the vocabulary and the
/// origin of every rule.
#[derive(Debug, Clone)]
pub struct Reduction {
    machine: Machine,
    rules: RuleSet,
    origins: HashMap<String, RuleOrigin>,
}

impl Reduction {
    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn origin(&self, rule_id: &str) -> Option<&RuleOrigin> {
        self.origins.get(rule_id)
    }

    pub fn state_predicate(&self, state: &str) -> String {
        state_pred(state)
    }

    pub fn letter_predicate(&self, symbol: &TapeSymbol) -> String {
        letter_pred(symbol)
    }

    /// The machine state named by a predicate, if it is a state predicate.
    pub fn state_of_predicate(&self, pred: &str) -> Option<&str> {
        let name = pred.strip_prefix("St_")?;
        self.machine.states().iter().find(|s| *s == name).map(String::as_str)
    }

    /// The tape symbol named by a predicate, if it is a letter predicate.
    pub fn letter_of_predicate(&self, pred: &str) -> Option<TapeSymbol> {
        let name = pred.strip_prefix("Sym_")?;
        if name == "B" {
            return Some(TapeSymbol::Blank);
        }
        self.machine
            .gamma()
            .iter()
            .find(|g| *g == name)
            .map(|g| TapeSymbol::letter(g.clone()))
    }

    /// Id of the head-move rule for `entry` with the given right-hand
    /// neighbour letter.
    pub fn transition_rule_id(&self, entry: &DeltaEntry, right_letter: &TapeSymbol) -> String {
        transition_rule_id(entry, right_letter)
    }

    pub fn copy_rule_id(&self, dir: Dir, letter: &TapeSymbol) -> String {
        match dir {
            Dir::Right => format!("copy_r_{letter}"),
            Dir::Left => format!("copy_l_{letter}"),
        }
    }

    pub fn end_rule_id(&self) -> &'static str {
        "end"
    }
}

fn state_pred(state: &str) -> String {
    format!("St_{state}")
}

fn letter_pred(symbol: &TapeSymbol) -> String {
    format!("Sym_{symbol}")
}

fn transition_rule_id(entry: &DeltaEntry, right_letter: &TapeSymbol) -> String {
    let dir = match entry.dir {
        Dir::Right => "r",
        Dir::Left => "l",
    };
    format!(
        "d_{}_{}_{}_{}_{}_{}",
        entry.from, entry.read, entry.to, entry.write, dir, right_letter
    )
}

fn uni(name: &str) -> Term {
    Term::universal(name)
}

fn exi(name: &str) -> Term {
    Term::existential(name)
}

fn atom(pred: &str, args: Vec<Term>) -> Atom {
    Atom::new(pred, args)
}

/// The four atoms abbreviated as brSet(x, w).
fn br_set(x: &Term, w: &Term) -> Vec<Atom> {
    vec![
        atom(PRED_F, vec![x.clone(), w.clone(), w.clone()]),
        atom(PRED_R, vec![x.clone(), w.clone(), w.clone()]),
        atom(PRED_REAL, vec![x.clone()]),
        atom(PRED_BRAKE, vec![w.clone()]),
    ]
}

fn push_dedup(dst: &mut Vec<Atom>, atoms: Vec<Atom>) {
    for a in atoms {
        if !dst.contains(&a) {
            dst.push(a);
        }
    }
}

/// Compiles a machine into its rule set.
pub fn compile_ruleset(m: &Machine) -> Result<Reduction, TmError> {
    let mut rules = Vec::new();
    let mut origins = HashMap::new();
    let mut push = |rule: Result<Rule, crate::model::ModelError>,
                    origin: RuleOrigin,
                    rules: &mut Vec<Rule>|
     -> Result<(), TmError> {
        let rule = rule.map_err(|e| TmError::Invalid(e.to_string()))?;
        origins.insert(rule.id().to_string(), origin);
        rules.push(rule);
        Ok(())
    };

    let letters = m.letters_with_blank();
    let w = uni("w");
    let x = uni("x");
    let y = uni("y");

    // Brake(w) -> every fixed and vocabulary predicate looped on w.
    let mut head = Vec::new();
    for a in &letters {
        head.push(atom(&letter_pred(a), vec![w.clone(), w.clone()]));
    }
    for q in m.states() {
        head.push(atom(&state_pred(q), vec![w.clone(), w.clone()]));
    }
    head.push(atom(PRED_F, vec![w.clone(), w.clone(), w.clone()]));
    head.push(atom(PRED_R, vec![w.clone(), w.clone(), w.clone()]));
    head.push(atom(PRED_CL, vec![w.clone(), w.clone()]));
    head.push(atom(PRED_CR, vec![w.clone(), w.clone()]));
    head.push(atom(PRED_REAL, vec![w.clone()]));
    head.push(atom(PRED_NEXT_BR, vec![w.clone(), w.clone()]));
    push(
        Rule::new("brake", vec![atom(PRED_BRAKE, vec![w.clone()])], head),
        RuleOrigin::Brake,
        &mut rules,
    )?;

    // brSet(x,w), NextBr(w,w2) -> brSet(x,w2)
    let w2 = uni("w2");
    let mut body = br_set(&x, &w);
    body.push(atom(PRED_NEXT_BR, vec![w.clone(), w2.clone()]));
    push(
        Rule::new("next_br", body, br_set(&x, &w2)),
        RuleOrigin::NextBrake,
        &mut rules,
    )?;

    // Head-move rules. The brake in the head is the body's own brake for
    // moves out of ordinary states, and a fresh existential for moves out
    // of qloop.
    let transition_rules = |entry: &DeltaEntry, c: &TapeSymbol| -> Rule {
        let from_qloop = entry.from == m.qloop();
        let xp = exi("xp");
        let yp = exi("yp");
        let head_brake: Term = if from_qloop { exi("wp") } else { w.clone() };

        let mut body = vec![
            atom(&state_pred(&entry.from), vec![x.clone(), w.clone()]),
            atom(&letter_pred(&entry.read), vec![x.clone(), w.clone()]),
        ];
        let r_atom = match entry.dir {
            Dir::Right => atom(PRED_R, vec![x.clone(), y.clone(), w.clone()]),
            Dir::Left => atom(PRED_R, vec![y.clone(), x.clone(), w.clone()]),
        };
        if from_qloop {
            // printed order differs: qloop(x,w), R(...), a(x,w), c(y,w)
            body = vec![
                atom(&state_pred(&entry.from), vec![x.clone(), w.clone()]),
                r_atom.clone(),
                atom(&letter_pred(&entry.read), vec![x.clone(), w.clone()]),
            ];
        } else {
            body.push(r_atom.clone());
        }
        body.push(atom(&letter_pred(c), vec![y.clone(), w.clone()]));
        push_dedup(&mut body, br_set(&x, &w));
        push_dedup(&mut body, br_set(&y, &w));

        let mut head = vec![
            atom(&state_pred(&entry.to), vec![yp.clone(), head_brake.clone()]),
            atom(&letter_pred(c), vec![yp.clone(), head_brake.clone()]),
            atom(&letter_pred(&TapeSymbol::letter(entry.write.clone())), vec![
                xp.clone(),
                head_brake.clone(),
            ]),
        ];
        match entry.dir {
            Dir::Right => {
                head.push(atom(PRED_CL, vec![xp.clone(), head_brake.clone()]));
                head.push(atom(PRED_CR, vec![yp.clone(), head_brake.clone()]));
                head.push(atom(PRED_R, vec![xp.clone(), yp.clone(), head_brake.clone()]));
            }
            Dir::Left => {
                head.push(atom(PRED_CL, vec![yp.clone(), head_brake.clone()]));
                head.push(atom(PRED_CR, vec![xp.clone(), head_brake.clone()]));
                head.push(atom(PRED_R, vec![yp.clone(), xp.clone(), head_brake.clone()]));
            }
        }
        head.push(atom(PRED_F, vec![x.clone(), xp.clone(), head_brake.clone()]));
        head.push(atom(PRED_F, vec![y.clone(), yp.clone(), head_brake.clone()]));
        push_dedup(&mut head, br_set(&xp, &head_brake));
        push_dedup(&mut head, br_set(&yp, &head_brake));
        if from_qloop {
            head.push(atom(PRED_NEXT_BR, vec![w.clone(), head_brake.clone()]));
        }
        Rule::new(transition_rule_id(entry, c), body, head).expect("transition rule is well-formed")
    };

    for entry in m.delta().iter().filter(|e| e.from != m.qloop()) {
        for c in &letters {
            push(
                Ok(transition_rules(entry, c)),
                RuleOrigin::Transition { entry: entry.clone(), right_letter: c.clone() },
                &mut rules,
            )?;
        }
    }
    for entry in m.delta().iter().filter(|e| e.from == m.qloop()) {
        for c in &letters {
            push(
                Ok(transition_rules(entry, c)),
                RuleOrigin::Transition { entry: entry.clone(), right_letter: c.clone() },
                &mut rules,
            )?;
        }
    }

    // Copy rules, one per letter and side.
    let xp = uni("xp");
    let yp = exi("yp");
    let wp = uni("wp");
    for a in &letters {
        let mut body = vec![
            atom(PRED_CR, vec![xp.clone(), wp.clone()]),
            atom(PRED_F, vec![x.clone(), xp.clone(), wp.clone()]),
            atom(PRED_R, vec![x.clone(), y.clone(), w.clone()]),
            atom(&letter_pred(a), vec![y.clone(), w.clone()]),
        ];
        push_dedup(&mut body, br_set(&x, &w));
        push_dedup(&mut body, br_set(&xp, &wp));
        push_dedup(&mut body, br_set(&y, &w));
        let mut head = vec![
            atom(PRED_F, vec![y.clone(), yp.clone(), wp.clone()]),
            atom(PRED_R, vec![xp.clone(), yp.clone(), wp.clone()]),
            atom(&letter_pred(a), vec![yp.clone(), wp.clone()]),
            atom(PRED_CR, vec![yp.clone(), wp.clone()]),
        ];
        push_dedup(&mut head, br_set(&yp, &wp));
        push(
            Rule::new(format!("copy_r_{a}"), body, head),
            RuleOrigin::CopyRight(a.clone()),
            &mut rules,
        )?;
    }
    for a in &letters {
        let mut body = vec![
            atom(PRED_CL, vec![xp.clone(), wp.clone()]),
            atom(PRED_F, vec![x.clone(), xp.clone(), wp.clone()]),
            atom(PRED_R, vec![y.clone(), x.clone(), w.clone()]),
            atom(&letter_pred(a), vec![y.clone(), w.clone()]),
        ];
        push_dedup(&mut body, br_set(&x, &w));
        push_dedup(&mut body, br_set(&xp, &wp));
        push_dedup(&mut body, br_set(&y, &w));
        let mut head = vec![
            atom(PRED_F, vec![y.clone(), yp.clone(), wp.clone()]),
            atom(PRED_R, vec![yp.clone(), xp.clone(), wp.clone()]),
            atom(&letter_pred(a), vec![yp.clone(), wp.clone()]),
            atom(PRED_CL, vec![yp.clone(), wp.clone()]),
        ];
        push_dedup(&mut head, br_set(&yp, &wp));
        push(
            Rule::new(format!("copy_l_{a}"), body, head),
            RuleOrigin::CopyLeft(a.clone()),
            &mut rules,
        )?;
    }

    // End rule: extend the represented configuration by one blank cell.
    let mut body = vec![
        atom(PRED_CR, vec![xp.clone(), wp.clone()]),
        atom(PRED_F, vec![x.clone(), xp.clone(), wp.clone()]),
        atom(PRED_END, vec![x.clone(), w.clone()]),
    ];
    push_dedup(&mut body, br_set(&x, &w));
    push_dedup(&mut body, br_set(&xp, &wp));
    let mut head = vec![
        atom(PRED_R, vec![xp.clone(), yp.clone(), wp.clone()]),
        atom(&letter_pred(&TapeSymbol::Blank), vec![yp.clone(), wp.clone()]),
        atom(PRED_END, vec![yp.clone(), wp.clone()]),
    ];
    push_dedup(&mut head, br_set(&yp, &wp));
    push(Rule::new("end", body, head), RuleOrigin::End, &mut rules)?;

    let rules = RuleSet::new(rules).map_err(|e| TmError::Invalid(e.to_string()))?;
    Ok(Reduction { machine: m.clone(), rules, origins })
}

/// Encodes a configuration as a database over fresh constants
/// `c1..c{n+1}` and the brake `w1`.
pub fn encode_config(c: &Configuration) -> FactSet {
    let n = c.len();
    let cell = |i: usize| Term::constant(format!("c{i}"));
    let w1 = Term::constant("w1");
    let mut facts = FactSet::new();
    let mut add = |a: Atom| {
        facts.insert(a).expect("encoded atoms are ground");
    };
    for i in 1..=n {
        add(atom(PRED_R, vec![cell(i), cell(i + 1), w1.clone()]));
        add(atom(&letter_pred(c.symbol_at(i)), vec![cell(i), w1.clone()]));
    }
    add(atom(&state_pred(c.state()), vec![cell(c.head()), w1.clone()]));
    add(atom(&letter_pred(&TapeSymbol::Blank), vec![cell(n + 1), w1.clone()]));
    add(atom(PRED_END, vec![cell(n + 1), w1.clone()]));
    for i in 1..=n + 1 {
        for a in br_set(&cell(i), &w1) {
            add(a);
        }
    }
    facts
}
