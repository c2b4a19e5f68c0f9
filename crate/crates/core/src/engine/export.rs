//! Structured trace export and DOT rendering of fact sets.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde_json::json;

use super::Derivation;
use crate::model::{FactSet, Term};

/// Writes one JSON record per line: a versioned header, then one record per
/// step with index, rule id, bindings, and emitted facts. Output is
/// byte-stable for identical derivations.
pub fn write_trace<W: Write>(d: &Derivation, out: &mut W) -> io::Result<()> {
    let header = json!({
        "format": "chase-trace",
        "version": 1,
        "database": d.database().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "status": format!("{:?}", d.status()),
    });
    writeln!(out, "{header}")?;
    for (index, record) in d.steps().iter().enumerate() {
        let bindings: BTreeMap<String, String> = record
            .extension
            .iter()
            .map(|(var, term)| (var.to_string(), term.to_string()))
            .collect();
        let line = json!({
            "step": index,
            "rule": record.trigger.rule_id,
            "bindings": bindings,
            "emitted": record.output.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "new": record.new_facts.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        });
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn node_id(term: &Term, ids: &BTreeMap<Term, usize>) -> String {
    format!("t{}", ids[term])
}

/// Renders a fact set as a DOT digraph: binary atoms as labeled edges,
/// unary atoms as node labels, higher-arity atoms as labeled hyperedge
/// nodes with position-labeled arcs. Nullary atoms become free-standing
/// boxes.
pub fn write_dot<W: Write>(facts: &FactSet, out: &mut W) -> io::Result<()> {
    let mut ids: BTreeMap<Term, usize> = BTreeMap::new();
    for term in facts.terms() {
        let next = ids.len();
        ids.entry(term).or_insert(next);
    }

    let mut labels: BTreeMap<&Term, Vec<String>> = BTreeMap::new();
    for atom in facts.iter() {
        if atom.arity() == 1 {
            labels.entry(&atom.args[0]).or_default().push(atom.predicate.clone());
        }
    }

    writeln!(out, "digraph facts {{")?;
    writeln!(out, "  node [shape=ellipse];")?;
    for (term, id) in &ids {
        let mut label = term.to_string();
        if let Some(preds) = labels.get(term) {
            label.push_str("\\n");
            label.push_str(&preds.join(","));
        }
        writeln!(out, "  t{id} [label=\"{label}\"];")?;
    }
    let mut hyper = 0usize;
    for atom in facts.iter() {
        match atom.arity() {
            0 => {
                writeln!(out, "  f{hyper} [shape=box,label=\"{}\"];", atom.predicate)?;
                hyper += 1;
            }
            1 => {}
            2 => {
                writeln!(
                    out,
                    "  {} -> {} [label=\"{}\"];",
                    node_id(&atom.args[0], &ids),
                    node_id(&atom.args[1], &ids),
                    atom.predicate
                )?;
            }
            _ => {
                writeln!(out, "  f{hyper} [shape=box,label=\"{}\"];", atom.predicate)?;
                for (pos, arg) in atom.args.iter().enumerate() {
                    writeln!(
                        out,
                        "  f{hyper} -> {} [label=\"{pos}\"];",
                        node_id(arg, &ids)
                    )?;
                }
                hyper += 1;
            }
        }
    }
    writeln!(out, "}}")
}
