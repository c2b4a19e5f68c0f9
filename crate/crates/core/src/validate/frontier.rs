//! Wild-frontier checking.
//!
//! A set of atoms has a wild frontier of a configuration, overseen by a
//! brake `w`, when it contains a faithful cell-by-cell encoding of that
//! configuration linked to `w`, the brake is not yet real, and no stray
//! atom hangs off the frontier cells. The closure clause reads "other" as:
//! any atom not required by the earlier clauses.

use std::collections::BTreeSet;

use crate::model::{Atom, FactSet, Term};
use crate::tmred::{
    Configuration, Reduction, TapeSymbol, PRED_BRAKE, PRED_END, PRED_F, PRED_R, PRED_REAL,
};

/// A configuration, its overseeing brake, and the witnessing cell terms
/// x_1 .. x_{n+1}.
#[derive(Debug, Clone)]
pub struct FrontierWitness {
    pub config: Configuration,
    pub overseer: Term,
    pub cells: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierCheck {
    pub ok: bool,
    /// Name of the first violated clause, when not ok.
    pub violated: Option<String>,
}

impl FrontierCheck {
    fn pass() -> Self {
        FrontierCheck { ok: true, violated: None }
    }

    fn fail(clause: impl Into<String>) -> Self {
        FrontierCheck { ok: false, violated: Some(clause.into()) }
    }
}

pub(crate) fn br_set_atoms(x: &Term, w: &Term) -> Vec<Atom> {
    vec![
        Atom::new(PRED_F, vec![x.clone(), w.clone(), w.clone()]),
        Atom::new(PRED_R, vec![x.clone(), w.clone(), w.clone()]),
        Atom::new(PRED_REAL, vec![x.clone()]),
        Atom::new(PRED_BRAKE, vec![w.clone()]),
    ]
}

/// Checks all five clauses of the wild-frontier definition for `rho`
/// overseen by `overseer` with the given cells.
pub fn check_wild_frontier(
    facts: &FactSet,
    rho: &Configuration,
    overseer: &Term,
    cells: &[Term],
    red: &Reduction,
) -> FrontierCheck {
    let n = rho.len();
    if cells.len() != n + 1 {
        return FrontierCheck::fail(format!(
            "witness has {} cells, configuration needs {}",
            cells.len(),
            n + 1
        ));
    }

    if facts.contains(&Atom::new(PRED_REAL, vec![overseer.clone()])) {
        return FrontierCheck::fail("overseer brake is already Real");
    }

    let mut required: BTreeSet<Atom> = BTreeSet::new();
    for i in 1..=n {
        let r = Atom::new(
            PRED_R,
            vec![cells[i - 1].clone(), cells[i].clone(), overseer.clone()],
        );
        let letter = Atom::new(
            red.letter_predicate(rho.symbol_at(i)),
            vec![cells[i - 1].clone(), overseer.clone()],
        );
        for atom in [r, letter] {
            if !facts.contains(&atom) {
                return FrontierCheck::fail(format!("missing cell atom {atom}"));
            }
            required.insert(atom);
        }
    }

    let head_atom = Atom::new(
        red.state_predicate(rho.state()),
        vec![cells[rho.head() - 1].clone(), overseer.clone()],
    );
    let end_atom = Atom::new(PRED_END, vec![cells[n].clone(), overseer.clone()]);
    let blank_atom = Atom::new(
        red.letter_predicate(&TapeSymbol::Blank),
        vec![cells[n].clone(), overseer.clone()],
    );
    for atom in [head_atom, end_atom, blank_atom] {
        if !facts.contains(&atom) {
            return FrontierCheck::fail(format!("missing head/end atom {atom}"));
        }
        required.insert(atom);
    }

    for cell in cells {
        for atom in br_set_atoms(cell, overseer) {
            if !facts.contains(&atom) {
                return FrontierCheck::fail(format!("missing brSet atom {atom}"));
            }
            required.insert(atom);
        }
    }

    // Any other atom with a frontier cell as first argument must have the
    // overseer as its second.
    let cell_set: BTreeSet<&Term> = cells.iter().collect();
    for atom in facts.iter() {
        let Some(first) = atom.args.first() else { continue };
        if !cell_set.contains(first) || required.contains(atom) {
            continue;
        }
        if atom.args.get(1) != Some(overseer) {
            return FrontierCheck::fail(format!("stray atom {atom} off the frontier"));
        }
    }

    FrontierCheck::pass()
}
