//! Fact-set comparison up to null renaming.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{Atom, FactSet, Term};

/// A per-null signature used to prune the bijection search: how often the
/// null occurs at each (predicate, position), and in how many facts.
fn null_signatures(f: &FactSet) -> HashMap<Term, BTreeMap<(String, usize), usize>> {
    let mut sigs: HashMap<Term, BTreeMap<(String, usize), usize>> = HashMap::new();
    for atom in f.iter() {
        for (pos, term) in atom.args.iter().enumerate() {
            if term.is_null() {
                *sigs
                    .entry(term.clone())
                    .or_default()
                    .entry((atom.predicate.clone(), pos))
                    .or_default() += 1;
            }
        }
    }
    sigs
}

fn rename(atom: &Atom, map: &BTreeMap<Term, Term>) -> Atom {
    Atom {
        predicate: atom.predicate.clone(),
        args: atom
            .args
            .iter()
            .map(|t| map.get(t).cloned().unwrap_or_else(|| t.clone()))
            .collect(),
    }
}

/// True iff there is a bijection on nulls (identity on constants) mapping
/// `a` onto `b`.
///
/// Brute-force backtracking over null assignments with predicate-signature
/// pruning; intended for desk-scale results with few nulls.
pub fn isomorphic_eq(a: &FactSet, b: &FactSet) -> bool {
    if a.len() != b.len() {
        return false;
    }

    // Null-free atoms must match exactly under any null bijection.
    let ground_a: BTreeSet<&Atom> =
        a.iter().filter(|at| !at.args.iter().any(Term::is_null)).collect();
    let ground_b: BTreeSet<&Atom> =
        b.iter().filter(|at| !at.args.iter().any(Term::is_null)).collect();
    if ground_a != ground_b {
        return false;
    }

    let sigs_a = null_signatures(a);
    let sigs_b = null_signatures(b);
    if sigs_a.len() != sigs_b.len() {
        return false;
    }

    let mut nulls_a: Vec<Term> = sigs_a.keys().cloned().collect();
    nulls_a.sort();

    // Candidates share the exact occurrence signature.
    let mut candidates: Vec<(Term, Vec<Term>)> = Vec::new();
    for n in &nulls_a {
        let sig = &sigs_a[n];
        let mut cands: Vec<Term> = sigs_b
            .iter()
            .filter(|(_, s)| *s == sig)
            .map(|(t, _)| t.clone())
            .collect();
        if cands.is_empty() {
            return false;
        }
        cands.sort();
        candidates.push((n.clone(), cands));
    }
    // Most constrained first.
    candidates.sort_by_key(|(_, c)| c.len());

    fn search(
        idx: usize,
        candidates: &[(Term, Vec<Term>)],
        map: &mut BTreeMap<Term, Term>,
        used: &mut BTreeSet<Term>,
        a: &FactSet,
        b: &FactSet,
    ) -> bool {
        if idx == candidates.len() {
            return a.iter().all(|atom| b.contains(&rename(atom, map)));
        }
        let (ref null, ref cands) = candidates[idx];
        for cand in cands {
            if used.contains(cand) {
                continue;
            }
            map.insert(null.clone(), cand.clone());
            used.insert(cand.clone());
            // Atoms fully mapped by the partial assignment must be present.
            let consistent = a.iter().all(|atom| {
                let all_mapped = atom
                    .args
                    .iter()
                    .all(|t| !t.is_null() || map.contains_key(t));
                !all_mapped || b.contains(&rename(atom, map))
            });
            if consistent && search(idx + 1, candidates, map, used, a, b) {
                return true;
            }
            map.remove(null);
            used.remove(cand);
        }
        false
    }

    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    search(0, &candidates, &mut map, &mut used, a, b)
}
