//! Bow ties: the R-graph component attached to a generated state atom, the
//! configuration sets read off its maximal paths, and their embedding into
//! encoded configurations.

use std::collections::{BTreeMap, BTreeSet};

use super::frontier::br_set_atoms;
use super::states::is_brake;
use super::ValidateError;
use crate::model::{Atom, FactSet, Term};
use crate::tmred::{encode_config, Configuration, Reduction, TapeSymbol, PRED_END, PRED_R};

/// Semantically meaningful terms: every term except the brakes.
pub fn semterms(facts: &FactSet) -> Vec<Term> {
    facts
        .terms()
        .into_iter()
        .filter(|t| !is_brake(facts, t))
        .collect()
}

/// E_R over the semterms: (x, y) iff R(x, y, w) holds for some w.
fn r_edges(facts: &FactSet) -> Vec<(Term, Term)> {
    let mut edges = BTreeSet::new();
    for atom in facts.with_predicate(PRED_R) {
        if atom.arity() != 3 {
            continue;
        }
        let (u, v) = (&atom.args[0], &atom.args[1]);
        if is_brake(facts, u) || is_brake(facts, v) {
            continue;
        }
        edges.insert((u.clone(), v.clone()));
    }
    edges.into_iter().collect()
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.rank[ra] < self.rank[rb] {
            self.parent[ra] = rb;
        } else if self.rank[ra] > self.rank[rb] {
            self.parent[rb] = ra;
        } else {
            self.parent[rb] = ra;
            self.rank[ra] += 1;
        }
    }
}

/// The weakly connected component of `term` in E_R, and the edges inside it.
fn component_of(facts: &FactSet, term: &Term) -> (BTreeSet<Term>, Vec<(Term, Term)>) {
    let nodes = semterms(facts);
    let index: BTreeMap<&Term, usize> = nodes.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let edges = r_edges(facts);
    let mut uf = UnionFind::new(nodes.len());
    for (u, v) in &edges {
        uf.union(index[u], index[v]);
    }
    let Some(&seed) = index.get(term) else {
        return (BTreeSet::new(), Vec::new());
    };
    let root = uf.find(seed);
    let mut members = BTreeSet::new();
    for (i, node) in nodes.iter().enumerate() {
        if uf.find(i) == root {
            members.insert(node.clone());
        }
    }
    let edges = edges
        .into_iter()
        .filter(|(u, v)| members.contains(u) && members.contains(v))
        .collect();
    (members, edges)
}

/// Nodes weakly reachable from `from` without entering `blocked`.
fn weak_reach(
    nodes: &BTreeSet<Term>,
    edges: &[(Term, Term)],
    from: &Term,
    blocked: &Term,
) -> BTreeSet<Term> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![from.clone()];
    while let Some(t) = stack.pop() {
        if t == *blocked || !nodes.contains(&t) || !seen.insert(t.clone()) {
            continue;
        }
        for (u, v) in edges {
            if u == &t && v != blocked && !seen.contains(v) {
                stack.push(v.clone());
            }
            if v == &t && u != blocked && !seen.contains(u) {
                stack.push(u.clone());
            }
        }
    }
    seen
}

/// A directed tree rooted at `root`: every node reachable from the root and
/// exactly |nodes| - 1 induced edges.
fn is_directed_tree(nodes: &BTreeSet<Term>, edges: &[(Term, Term)], root: &Term) -> bool {
    if !nodes.contains(root) {
        return false;
    }
    let induced: Vec<&(Term, Term)> = edges
        .iter()
        .filter(|(u, v)| nodes.contains(u) && nodes.contains(v))
        .collect();
    if induced.len() != nodes.len() - 1 {
        return false;
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![root.clone()];
    while let Some(t) = stack.pop() {
        if !seen.insert(t.clone()) {
            continue;
        }
        for (u, v) in &induced {
            if u == &t && !seen.contains(v) {
                stack.push(v.clone());
            }
        }
    }
    seen.len() == nodes.len()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowtieCheck {
    pub ok: bool,
    pub center: Option<(Term, Term)>,
    pub violated: Option<String>,
}

/// Checks that the weakly connected R-component of the state atom's term is
/// a bow tie: some center edge (x, y) splits it into a left part that is a
/// directed tree towards x and a right part that is a directed tree away
/// from y, partitioning the component.
pub fn check_bowtie(facts: &FactSet, state_atom: &Atom) -> BowtieCheck {
    let term = &state_atom.args[0];
    let (members, edges) = component_of(facts, term);
    if members.is_empty() {
        return BowtieCheck {
            ok: false,
            center: None,
            violated: Some("term occurs in no R-edge".into()),
        };
    }
    let inverted: Vec<(Term, Term)> =
        edges.iter().map(|(u, v)| (v.clone(), u.clone())).collect();
    for (x, y) in &edges {
        let left = weak_reach(&members, &edges, x, y);
        let right = weak_reach(&members, &edges, y, x);
        if left.intersection(&right).next().is_some() {
            continue;
        }
        if left.len() + right.len() != members.len() {
            continue;
        }
        if !is_directed_tree(&left, &inverted, x) {
            continue;
        }
        if !is_directed_tree(&right, &edges, y) {
            continue;
        }
        // Every edge lies in one of the parts or is the center itself; a
        // stray crossing edge (say, a back edge closing a cycle) is not a
        // bow tie.
        let partitioned = edges.iter().all(|(u, v)| {
            (left.contains(u) && left.contains(v))
                || (right.contains(u) && right.contains(v))
                || (u == x && v == y)
        });
        if !partitioned {
            continue;
        }
        return BowtieCheck { ok: true, center: Some((x.clone(), y.clone())), violated: None };
    }
    BowtieCheck {
        ok: false,
        center: None,
        violated: Some("no edge splits the component into two trees".into()),
    }
}

/// All maximal directed paths of the component: from in-degree-0 nodes to
/// out-degree-0 nodes, in lexicographic order.
fn maximal_paths(members: &BTreeSet<Term>, edges: &[(Term, Term)]) -> Vec<Vec<Term>> {
    let mut succs: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();
    let mut has_pred: BTreeSet<&Term> = BTreeSet::new();
    for (u, v) in edges {
        succs.entry(u).or_default().push(v);
        has_pred.insert(v);
    }
    for list in succs.values_mut() {
        list.sort();
    }
    let sources: Vec<&Term> = members.iter().filter(|t| !has_pred.contains(t)).collect();
    let mut paths = Vec::new();
    for source in sources {
        let mut stack = vec![vec![source]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            match succs.get(last) {
                Some(next) if !next.is_empty() => {
                    for succ in next.iter().rev() {
                        if path.contains(succ) {
                            continue;
                        }
                        let mut longer = path.clone();
                        longer.push(succ);
                        stack.push(longer);
                    }
                }
                _ => paths.push(path.iter().map(|t| (*t).clone()).collect()),
            }
        }
    }
    paths.sort();
    paths
}

/// The configuration sets associated with a generated state atom: one per
/// maximal path of its bow tie, holding the state atom, the brSet atoms of
/// the path's cells, and every R-, letter-, and End-atom over those cells
/// carrying the state atom's brake.
pub fn extract_configs(
    facts: &FactSet,
    state_atom: &Atom,
    red: &Reduction,
) -> Result<Vec<FactSet>, ValidateError> {
    let check = check_bowtie(facts, state_atom);
    if !check.ok {
        return Err(ValidateError::NotABowtie(
            state_atom.clone(),
            check.violated.unwrap_or_default(),
        ));
    }
    let w = &state_atom.args[1];
    let (members, edges) = component_of(facts, &state_atom.args[0]);
    let mut sets = Vec::new();
    for path in maximal_paths(&members, &edges) {
        let cells: BTreeSet<&Term> = path.iter().collect();
        let mut set = FactSet::new();
        set.insert(state_atom.clone()).expect("state atom is ground");
        for cell in &path {
            for atom in br_set_atoms(cell, w) {
                set.insert(atom).expect("ground");
            }
        }
        for atom in facts.iter() {
            let in_scope = atom.predicate == PRED_R
                || atom.predicate == PRED_END
                || red.letter_of_predicate(&atom.predicate).is_some();
            if !in_scope || atom.args.last() != Some(w) {
                continue;
            }
            let leading = &atom.args[..atom.arity() - 1];
            if leading.iter().all(|t| cells.contains(t)) {
                set.insert(atom.clone()).expect("ground");
            }
        }
        if !sets.contains(&set) {
            sets.push(set);
        }
    }
    Ok(sets)
}

/// One maximal path through the component of a state atom, with the head
/// position and every tape reading consistent with the letter atoms on its
/// cells. Cells carrying several letters yield several tapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecoding {
    pub cells: Vec<Term>,
    /// 1-based position of the state atom's term in the path.
    pub head: usize,
    pub state: String,
    pub tapes: Vec<Vec<TapeSymbol>>,
}

/// Reads every maximal path through the state atom's component, without
/// requiring the component to be a bow tie. Paths not containing the state
/// atom's term are skipped.
pub fn read_component_paths(
    facts: &FactSet,
    state_atom: &Atom,
    red: &Reduction,
) -> Result<Vec<PathDecoding>, ValidateError> {
    if state_atom.arity() != 2 || red.state_of_predicate(&state_atom.predicate).is_none() {
        return Err(ValidateError::NotStateAtom(state_atom.clone()));
    }
    let state = red
        .state_of_predicate(&state_atom.predicate)
        .expect("checked above")
        .to_string();
    let (members, edges) = component_of(facts, &state_atom.args[0]);
    let mut out = Vec::new();
    for path in maximal_paths(&members, &edges) {
        let Some(pos) = path.iter().position(|t| t == &state_atom.args[0]) else {
            continue;
        };
        let mut letters_per_cell: Vec<Vec<TapeSymbol>> = Vec::new();
        for cell in &path {
            let mut letters = BTreeSet::new();
            for atom in facts.iter() {
                if atom.arity() == 2 && &atom.args[0] == cell {
                    if let Some(letter) = red.letter_of_predicate(&atom.predicate) {
                        letters.insert(letter);
                    }
                }
            }
            letters_per_cell.push(letters.into_iter().collect());
        }
        let mut tapes: Vec<Vec<TapeSymbol>> = vec![Vec::new()];
        for letters in &letters_per_cell {
            let mut grown = Vec::new();
            for tape in &tapes {
                for letter in letters {
                    let mut t = tape.clone();
                    t.push(letter.clone());
                    grown.push(t);
                }
            }
            tapes = grown;
        }
        tapes.sort();
        out.push(PathDecoding { cells: path, head: pos + 1, state: state.clone(), tapes });
    }
    Ok(out)
}

/// True iff the configuration set homomorphically embeds into the encoding
/// of some configuration: the path decodes to a configuration whose
/// encoding contains the set after renaming cells to `c1..` and the brake
/// to `w1`.
pub fn embeds_into_encoding(
    set: &FactSet,
    state_atom: &Atom,
    red: &Reduction,
) -> Result<bool, ValidateError> {
    let readings = read_component_paths(set, state_atom, red)?;
    let w = &state_atom.args[1];
    for reading in &readings {
        let m = reading.cells.len();
        let has_end = set.contains(&Atom::new(
            PRED_END,
            vec![reading.cells[m - 1].clone(), w.clone()],
        ));
        for tape in &reading.tapes {
            let candidate = if has_end {
                if tape.last() != Some(&TapeSymbol::Blank) {
                    continue;
                }
                Configuration::new(tape[..m - 1].to_vec(), reading.head, reading.state.clone())
            } else {
                let mut t = tape.clone();
                t.push(TapeSymbol::Blank);
                Configuration::new(t, reading.head, reading.state.clone())
            };
            let Ok(rho) = candidate else { continue };
            let encoded = encode_config(&rho);
            let mut rename: BTreeMap<&Term, Term> = BTreeMap::new();
            for (i, cell) in reading.cells.iter().enumerate() {
                rename.insert(cell, Term::constant(format!("c{}", i + 1)));
            }
            rename.insert(w, Term::constant("w1"));
            let embedded = set.iter().all(|atom| {
                let renamed = Atom::new(
                    atom.predicate.clone(),
                    atom.args
                        .iter()
                        .map(|t| rename.get(t).cloned().unwrap_or_else(|| t.clone()))
                        .collect(),
                );
                encoded.contains(&renamed)
            });
            if embedded {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
