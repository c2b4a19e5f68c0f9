//! State atoms, the precedence order between them, the configuration
//! associated with a state atom, and the consistency check between the two.

use std::collections::{BTreeMap, BTreeSet};

use super::ValidateError;
use crate::engine::Derivation;
use crate::model::{Atom, FactSet, Term};
use crate::tmred::{
    apply_transition, Configuration, Reduction, RuleOrigin, TapeSymbol, PRED_BRAKE, PRED_END,
    PRED_R,
};

pub(crate) fn is_brake(facts: &FactSet, term: &Term) -> bool {
    facts.contains(&Atom::new(PRED_BRAKE, vec![term.clone()]))
}

/// The state atoms of a fact set: atoms q(x, w) with q a state predicate
/// and x not a brake, in lexicographic order.
pub fn state_atoms(facts: &FactSet, red: &Reduction) -> Vec<Atom> {
    facts
        .iter()
        .filter(|a| {
            a.arity() == 2
                && red.state_of_predicate(&a.predicate).is_some()
                && !is_brake(facts, &a.args[0])
        })
        .cloned()
        .collect()
}

/// True iff some recorded step has `a` in its support and `b` among its
/// emitted facts.
pub fn precedes(d: &Derivation, a: &Atom, b: &Atom) -> bool {
    d.steps().iter().any(|record| {
        record.output.contains(b)
            && record
                .trigger
                .support(d.rules())
                .map(|support| support.contains(a))
                .unwrap_or(false)
    })
}

fn ensure_state_atom(d: &Derivation, red: &Reduction, a: &Atom) -> Result<(), ValidateError> {
    if !d.result().contains(a) {
        return Err(ValidateError::NotInDerivation(a.clone()));
    }
    if a.arity() != 2
        || red.state_of_predicate(&a.predicate).is_none()
        || is_brake(d.result(), &a.args[0])
    {
        return Err(ValidateError::NotStateAtom(a.clone()));
    }
    Ok(())
}

/// The configuration associated with a state atom: the start configuration
/// for database atoms, and otherwise the parent's configuration pushed
/// through the transition whose rule emitted the atom.
pub fn conf_of(
    d: &Derivation,
    red: &Reduction,
    a: &Atom,
    rho0: &Configuration,
) -> Result<Configuration, ValidateError> {
    ensure_state_atom(d, red, a)?;
    if d.database().contains(a) {
        return Ok(rho0.clone());
    }
    let prov = d
        .provenance(a)
        .ok_or_else(|| ValidateError::MissingProvenance(a.clone()))?;
    let origin = red.origin(&prov.record.trigger.rule_id);
    let Some(RuleOrigin::Transition { entry, .. }) = origin else {
        return Err(ValidateError::NotTransitionAtom(a.clone()));
    };
    let parent = prov
        .support
        .iter()
        .find(|s| {
            s.arity() == 2
                && red.state_of_predicate(&s.predicate).is_some()
                && !is_brake(d.result(), &s.args[0])
        })
        .cloned()
        .ok_or_else(|| ValidateError::NoParent(a.clone()))?;
    let parent_conf = conf_of(d, red, &parent, rho0)?;
    apply_transition(&parent_conf, entry).map_err(ValidateError::Tm)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyCheck {
    pub ok: bool,
    pub violated: Option<String>,
}

impl ConsistencyCheck {
    fn fail(clause: impl Into<String>) -> Self {
        ConsistencyCheck { ok: false, violated: Some(clause.into()) }
    }
}

/// Walk lengths from `start` along the given directed edges, up to `bound`
/// steps. `lengths[t]` collects every i with a length-i walk start -> t.
fn walk_lengths(
    start: &Term,
    edges: &BTreeMap<Term, Vec<Term>>,
    bound: usize,
) -> BTreeMap<Term, BTreeSet<usize>> {
    let mut lengths: BTreeMap<Term, BTreeSet<usize>> = BTreeMap::new();
    let mut frontier: BTreeSet<Term> = BTreeSet::new();
    frontier.insert(start.clone());
    for i in 1..=bound {
        let mut next: BTreeSet<Term> = BTreeSet::new();
        for node in &frontier {
            for succ in edges.get(node).into_iter().flatten() {
                next.insert(succ.clone());
            }
        }
        for node in &next {
            lengths.entry(node.clone()).or_default().insert(i);
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    lengths
}

/// The letter the configuration shows at 1-based position `j`; the extra
/// encoded cell n+1 reads as blank.
fn letter_at(rho: &Configuration, j: usize) -> TapeSymbol {
    rho.symbol_at(j).clone()
}

/// Computes the atoms associated with the state atom `a` (the largest
/// subset of the result over the R-reachable and co-reachable non-brake
/// terms, with the brake only in last argument positions) and checks the
/// five consistency clauses against `conf_of(a)`.
pub fn check_consistency(
    d: &Derivation,
    red: &Reduction,
    a: &Atom,
    rho0: &Configuration,
) -> Result<ConsistencyCheck, ValidateError> {
    let rho = conf_of(d, red, a, rho0)?;
    let facts = d.result();
    let x = a.args[0].clone();
    let w = a.args[1].clone();
    let n = rho.len();
    let p = rho.head();

    // R-edges between non-brake terms.
    let mut forward_edges: BTreeMap<Term, Vec<Term>> = BTreeMap::new();
    let mut backward_edges: BTreeMap<Term, Vec<Term>> = BTreeMap::new();
    for atom in facts.with_predicate(PRED_R) {
        if atom.arity() != 3 {
            continue;
        }
        let (u, v) = (&atom.args[0], &atom.args[1]);
        if is_brake(facts, u) || is_brake(facts, v) {
            continue;
        }
        forward_edges.entry(u.clone()).or_default().push(v.clone());
        backward_edges.entry(v.clone()).or_default().push(u.clone());
    }
    let bound = n + 2;
    let forward = walk_lengths(&x, &forward_edges, bound);
    let backward = walk_lengths(&x, &backward_edges, bound);

    let mut allowed: BTreeSet<Term> = BTreeSet::new();
    allowed.insert(x.clone());
    allowed.insert(w.clone());
    allowed.extend(forward.keys().cloned());
    allowed.extend(backward.keys().cloned());

    // Largest subset over the allowed terms, with w only in last position.
    let assoc: Vec<&Atom> = facts
        .iter()
        .filter(|atom| {
            atom.args.iter().all(|t| allowed.contains(t))
                && atom
                    .args
                    .iter()
                    .take(atom.arity().saturating_sub(1))
                    .all(|t| t != &w)
        })
        .collect();

    // Clause 1: a is the only state atom, and its state matches.
    let states: Vec<&&Atom> = assoc
        .iter()
        .filter(|at| {
            at.arity() == 2
                && red.state_of_predicate(&at.predicate).is_some()
                && !is_brake(facts, &at.args[0])
        })
        .collect();
    if states.len() != 1 || *states[0] != a {
        return Ok(ConsistencyCheck::fail(format!(
            "expected exactly the state atom {a}, found {} state atoms",
            states.len()
        )));
    }
    if red.state_of_predicate(&a.predicate) != Some(rho.state()) {
        return Ok(ConsistencyCheck::fail("state differs from the configuration"));
    }

    // Clause 2: exactly one letter atom on the head term, showing t(p).
    let head_letters: Vec<&&Atom> = assoc
        .iter()
        .filter(|at| {
            red.letter_of_predicate(&at.predicate).is_some() && at.args.contains(&x)
        })
        .collect();
    if head_letters.len() != 1 {
        return Ok(ConsistencyCheck::fail(format!(
            "{} letter atoms on the head term",
            head_letters.len()
        )));
    }
    let shown = red.letter_of_predicate(&head_letters[0].predicate).unwrap();
    if shown != letter_at(&rho, p) {
        return Ok(ConsistencyCheck::fail(format!(
            "head letter {shown} differs from tape letter {}",
            letter_at(&rho, p)
        )));
    }

    // Clauses 3 and 5: letters along forward and backward walks agree with
    // the tape; the brake is always the second argument.
    for atom in &assoc {
        let Some(letter) = red.letter_of_predicate(&atom.predicate) else {
            continue;
        };
        if atom.arity() != 2 {
            continue;
        }
        let cell = &atom.args[0];
        if cell == &x {
            continue;
        }
        if let Some(lengths) = forward.get(cell) {
            for &i in lengths {
                if atom.args[1] != w {
                    return Ok(ConsistencyCheck::fail(format!("{atom}: brake differs")));
                }
                if p + i > n + 1 {
                    return Ok(ConsistencyCheck::fail(format!(
                        "{atom}: position {} beyond the tape",
                        p + i
                    )));
                }
                if letter != letter_at(&rho, p + i) {
                    return Ok(ConsistencyCheck::fail(format!(
                        "{atom}: letter differs from tape position {}",
                        p + i
                    )));
                }
            }
        }
        if let Some(lengths) = backward.get(cell) {
            for &i in lengths {
                if atom.args[1] != w {
                    return Ok(ConsistencyCheck::fail(format!("{atom}: brake differs")));
                }
                if i >= p {
                    return Ok(ConsistencyCheck::fail(format!(
                        "{atom}: position {} before the tape start",
                        p as i64 - i as i64
                    )));
                }
                if letter != letter_at(&rho, p - i) {
                    return Ok(ConsistencyCheck::fail(format!(
                        "{atom}: letter differs from tape position {}",
                        p - i
                    )));
                }
            }
        }
    }

    // Clause 4: at most one End atom, at forward distance n + 1 - p.
    let ends: Vec<&&Atom> = assoc
        .iter()
        .filter(|at| at.predicate == PRED_END && at.arity() == 2)
        .collect();
    if ends.len() > 1 {
        return Ok(ConsistencyCheck::fail(format!("{} End atoms", ends.len())));
    }
    if let Some(end) = ends.first() {
        if end.args[1] != w {
            return Ok(ConsistencyCheck::fail("End atom carries a different brake"));
        }
        let cell = &end.args[0];
        let ok = if cell == &x {
            p == n + 1
        } else {
            forward
                .get(cell)
                .is_some_and(|lengths| lengths.iter().any(|&i| p + i == n + 1))
        };
        if !ok {
            return Ok(ConsistencyCheck::fail(
                "End atom is not at the end of the represented tape",
            ));
        }
    }

    Ok(ConsistencyCheck { ok: true, violated: None })
}
