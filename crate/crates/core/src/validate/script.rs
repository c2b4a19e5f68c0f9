//! The scripted simulation block: given a wild frontier and a machine
//! transition, fire the head-move rule, then the prescribed number of left
//! and right copies, then the end rule, producing a wild frontier of the
//! successor configuration.
//!
//! The block applies exactly: one transition rule; p-1 left copies and n-p
//! right copies for a right move (p-2 and n-p+1 for a left move); and one
//! end-rule application. The new overseer is a fresh brake exactly when the
//! source configuration is in qloop.

use super::frontier::FrontierWitness;
use super::ValidateError;
use crate::engine::Derivation;
use crate::matching::Trigger;
use crate::model::{Substitution, Term};
use crate::tmred::{apply_transition, Configuration, DeltaEntry, Dir, Reduction};

/// The witness for a freshly encoded configuration database: cells
/// `c1..c{n+1}` overseen by `w1`.
pub fn initial_witness(rho: &Configuration) -> FrontierWitness {
    FrontierWitness {
        config: rho.clone(),
        overseer: Term::constant("w1"),
        cells: (1..=rho.len() + 1)
            .map(|i| Term::constant(format!("c{i}")))
            .collect(),
    }
}

fn bind(pairs: &[(&str, &Term)]) -> Substitution {
    let mut sigma = Substitution::new();
    for (var, term) in pairs {
        sigma.bind(*var, (*term).clone()).expect("ground script bindings");
    }
    sigma
}

fn fire(
    d: &mut Derivation,
    rule_id: &str,
    sigma: Substitution,
) -> Result<Substitution, ValidateError> {
    let trigger = Trigger::new(rule_id, sigma);
    d.chase_step(&trigger)?;
    Ok(d.steps().last().expect("step recorded").extension.clone())
}

fn extension_null(ext: &Substitution, var: &str) -> Result<Term, ValidateError> {
    ext.get(var)
        .cloned()
        .ok_or_else(|| ValidateError::BadWitness(format!("no {var} in the step extension")))
}

/// Executes one simulation block for `entry` on the given wild frontier and
/// returns the successor's witness. The derivation must contain the
/// frontier; the caller picks the transition (this is where the machine's
/// non-determinism surfaces).
pub fn frontier_step(
    d: &mut Derivation,
    red: &Reduction,
    witness: &FrontierWitness,
    entry: &DeltaEntry,
) -> Result<FrontierWitness, ValidateError> {
    let rho = &witness.config;
    let n = rho.len();
    let p = rho.head();
    let w = &witness.overseer;
    let cells = &witness.cells;
    if cells.len() != n + 1 {
        return Err(ValidateError::BadWitness(format!(
            "witness has {} cells for a {n}-cell configuration",
            cells.len()
        )));
    }
    if rho.state() != entry.from || rho.symbol_at(p) != &entry.read {
        return Err(ValidateError::BadWitness(format!(
            "transition {}/{} does not apply to {rho}",
            entry.from, entry.read
        )));
    }
    let from_qloop = entry.from == red.machine().qloop();
    let successor = apply_transition(rho, entry)?;

    // Cells of the successor frontier, 1-based; filled in as rules fire.
    let mut new_cells: Vec<Option<Term>> = vec![None; n + 3];

    let new_overseer = match entry.dir {
        Dir::Right => {
            let neighbour = rho.symbol_at(p + 1).clone();
            let rule = red.transition_rule_id(entry, &neighbour);
            let sigma = bind(&[("x", &cells[p - 1]), ("y", &cells[p]), ("w", w)]);
            let ext = fire(d, &rule, sigma)?;
            new_cells[p] = Some(extension_null(&ext, "xp")?);
            new_cells[p + 1] = Some(extension_null(&ext, "yp")?);
            let overseer = if from_qloop { extension_null(&ext, "wp")? } else { w.clone() };

            for i in 1..=p.saturating_sub(1) {
                let letter = rho.symbol_at(p - i).clone();
                let rule = red.copy_rule_id(Dir::Left, &letter);
                let xp = new_cells[p - i + 1].clone().expect("copied in order");
                let sigma = bind(&[
                    ("x", &cells[p - i]),
                    ("xp", &xp),
                    ("y", &cells[p - i - 1]),
                    ("w", w),
                    ("wp", &overseer),
                ]);
                let ext = fire(d, &rule, sigma)?;
                new_cells[p - i] = Some(extension_null(&ext, "yp")?);
            }
            for i in 1..=n - p {
                let letter = rho.symbol_at(p + i + 1).clone();
                let rule = red.copy_rule_id(Dir::Right, &letter);
                let xp = new_cells[p + i].clone().expect("copied in order");
                let sigma = bind(&[
                    ("x", &cells[p + i - 1]),
                    ("xp", &xp),
                    ("y", &cells[p + i]),
                    ("w", w),
                    ("wp", &overseer),
                ]);
                let ext = fire(d, &rule, sigma)?;
                new_cells[p + i + 1] = Some(extension_null(&ext, "yp")?);
            }
            overseer
        }
        Dir::Left => {
            if p < 2 {
                return Err(ValidateError::BadWitness(
                    "left move from the first cell".into(),
                ));
            }
            let neighbour = rho.symbol_at(p - 1).clone();
            let rule = red.transition_rule_id(entry, &neighbour);
            let sigma = bind(&[("x", &cells[p - 1]), ("y", &cells[p - 2]), ("w", w)]);
            let ext = fire(d, &rule, sigma)?;
            new_cells[p] = Some(extension_null(&ext, "xp")?);
            new_cells[p - 1] = Some(extension_null(&ext, "yp")?);
            let overseer = if from_qloop { extension_null(&ext, "wp")? } else { w.clone() };

            for i in 1..=p - 2 {
                let letter = rho.symbol_at(p - i - 1).clone();
                let rule = red.copy_rule_id(Dir::Left, &letter);
                let xp = new_cells[p - i].clone().expect("copied in order");
                let sigma = bind(&[
                    ("x", &cells[p - i - 1]),
                    ("xp", &xp),
                    ("y", &cells[p - i - 2]),
                    ("w", w),
                    ("wp", &overseer),
                ]);
                let ext = fire(d, &rule, sigma)?;
                new_cells[p - i - 1] = Some(extension_null(&ext, "yp")?);
            }
            for i in 1..=n - p + 1 {
                let letter = rho.symbol_at(p + i).clone();
                let rule = red.copy_rule_id(Dir::Right, &letter);
                let xp = new_cells[p - 1 + i].clone().expect("copied in order");
                let sigma = bind(&[
                    ("x", &cells[p + i - 2]),
                    ("xp", &xp),
                    ("y", &cells[p + i - 1]),
                    ("w", w),
                    ("wp", &overseer),
                ]);
                let ext = fire(d, &rule, sigma)?;
                new_cells[p + i] = Some(extension_null(&ext, "yp")?);
            }
            overseer
        }
    };

    // End rule: one more blank cell on the right.
    let xp = new_cells[n + 1]
        .clone()
        .ok_or_else(|| ValidateError::BadWitness("cell n+1 was never copied".into()))?;
    let sigma = bind(&[
        ("x", &cells[n]),
        ("xp", &xp),
        ("w", w),
        ("wp", &new_overseer),
    ]);
    let ext = fire(d, red.end_rule_id(), sigma)?;
    new_cells[n + 2] = Some(extension_null(&ext, "yp")?);

    let cells = new_cells
        .into_iter()
        .skip(1)
        .map(|c| c.ok_or_else(|| ValidateError::BadWitness("missing successor cell".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrontierWitness { config: successor, overseer: new_overseer, cells })
}
