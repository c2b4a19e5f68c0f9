//! Structural checker subcommands. Each prints a one-line result and a
//! structured JSON report entry (checker name, witness bindings, pass/fail,
//! first violated clause).

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use serde_json::json;

use chase_core::engine::{self, check_dagger_violation, Derivation};
use chase_core::model::{parse_atom, parse_fact_set, KnowledgeBase};
use chase_core::tmred::compile_ruleset;
use chase_core::validate::{
    check_bowtie, check_consistency, check_wild_frontier, conf_of, extract_configs,
    frontier_step, initial_witness, state_atoms,
};

use super::{load_kb, load_machine, parse_cli_term, read_to_string, ConfigArgs, StrategyArgs};

#[derive(Subcommand)]
pub enum CheckCommand {
    /// Check the wild-frontier conditions on a fact set.
    #[command(name = "wild-frontier")]
    WildFrontier(WildFrontierArgs),
    /// Check the bow-tie conditions around a state atom.
    Bowtie(BowtieArgs),
    /// Replay simulation blocks and check every state atom's consistency.
    Consistency(ConsistencyArgs),
    /// Run a chase and look for a breadth-first violation witness.
    Dagger(DaggerArgs),
}

#[derive(Args)]
pub struct WildFrontierArgs {
    #[arg(long)]
    machine: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// The overseeing brake term.
    #[arg(long)]
    overseer: String,
    /// Comma-separated cell terms x1..x{n+1}.
    #[arg(long)]
    cells: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
pub struct BowtieArgs {
    #[arg(long)]
    machine: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    /// The state atom, e.g. 'St_qloop(_:n0_1,w)'.
    #[arg(long)]
    atom: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
pub struct ConsistencyArgs {
    #[arg(long)]
    machine: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    /// How many simulation blocks to replay (canonical successor choice).
    #[arg(long, default_value_t = 3)]
    blocks: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
pub struct DaggerArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    #[command(flatten)]
    strategy: StrategyArgs,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn emit(report_path: Option<&PathBuf>, entry: serde_json::Value) -> Result<()> {
    if let Some(path) = report_path {
        std::fs::write(path, format!("{entry:#}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

pub fn dispatch(cmd: CheckCommand) -> Result<()> {
    match cmd {
        CheckCommand::WildFrontier(args) => {
            let machine = load_machine(&args.machine)?;
            let reduction = compile_ruleset(&machine)?;
            let facts = parse_fact_set(&read_to_string(&args.facts)?)?;
            let config = args.config.build(&machine)?;
            let overseer = parse_cli_term(&args.overseer);
            let cells: Vec<_> = args.cells.split(',').map(|s| parse_cli_term(s.trim())).collect();
            let check = check_wild_frontier(&facts, &config, &overseer, &cells, &reduction);
            println!(
                "wild-frontier {} for {config} overseen by {overseer}{}",
                if check.ok { "PASS" } else { "FAIL" },
                check.violated.as_deref().map(|v| format!(": {v}")).unwrap_or_default()
            );
            emit(
                args.report.as_ref(),
                json!({
                    "checker": "wild-frontier",
                    "config": config.to_string(),
                    "overseer": overseer.to_string(),
                    "cells": cells.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "pass": check.ok,
                    "violated": check.violated,
                }),
            )
        }
        CheckCommand::Bowtie(args) => {
            let machine = load_machine(&args.machine)?;
            let reduction = compile_ruleset(&machine)?;
            let facts = parse_fact_set(&read_to_string(&args.facts)?)?;
            let atom = parse_atom(&args.atom)?;
            let check = check_bowtie(&facts, &atom);
            let configs = if check.ok {
                Some(extract_configs(&facts, &atom, &reduction)?.len())
            } else {
                None
            };
            println!(
                "bowtie {} at {atom}{}{}",
                if check.ok { "PASS" } else { "FAIL" },
                check
                    .center
                    .as_ref()
                    .map(|(x, y)| format!(", center ({x},{y})"))
                    .unwrap_or_default(),
                configs
                    .map(|n| format!(", {n} configuration sets"))
                    .unwrap_or_default()
            );
            emit(
                args.report.as_ref(),
                json!({
                    "checker": "bowtie",
                    "atom": atom.to_string(),
                    "pass": check.ok,
                    "center": check.center.map(|(x, y)| vec![x.to_string(), y.to_string()]),
                    "configuration_sets": configs,
                    "violated": check.violated,
                }),
            )
        }
        CheckCommand::Consistency(args) => {
            let machine = load_machine(&args.machine)?;
            let reduction = compile_ruleset(&machine)?;
            let rho0 = args.config.build(&machine)?;
            let kb = KnowledgeBase::new(
                reduction.rules().clone(),
                chase_core::tmred::encode_config(&rho0),
            )?;
            let mut derivation = Derivation::new(&kb);
            let mut witness = initial_witness(&rho0);
            for block in 0..args.blocks {
                let head = witness.config.symbol_at(witness.config.head()).clone();
                let entries = machine.transitions_from(witness.config.state(), &head);
                let Some(entry) = entries.first() else {
                    println!("machine halts after {block} blocks");
                    break;
                };
                let entry = (*entry).clone();
                witness = frontier_step(&mut derivation, &reduction, &witness, &entry)?;
            }
            let mut entries = Vec::new();
            let mut all_ok = true;
            for atom in state_atoms(derivation.result(), &reduction) {
                let check = check_consistency(&derivation, &reduction, &atom, &rho0)?;
                let config = conf_of(&derivation, &reduction, &atom, &rho0)?;
                println!(
                    "consistency {} at {atom} (configuration {config}){}",
                    if check.ok { "PASS" } else { "FAIL" },
                    check.violated.as_deref().map(|v| format!(": {v}")).unwrap_or_default()
                );
                all_ok &= check.ok;
                entries.push(json!({
                    "checker": "consistency",
                    "atom": atom.to_string(),
                    "config": config.to_string(),
                    "pass": check.ok,
                    "violated": check.violated,
                }));
            }
            println!("consistency overall: {}", if all_ok { "PASS" } else { "FAIL" });
            emit(args.report.as_ref(), json!(entries))
        }
        CheckCommand::Dagger(args) => {
            let kb = load_kb(&args.rules, &args.facts)?;
            let strategy = args.strategy.build()?;
            let mut derivation = Derivation::new(&kb);
            engine::continue_chase(&mut derivation, strategy, args.max_steps)?;
            let witness = check_dagger_violation(&derivation);
            match &witness {
                Some(w) => println!(
                    "dagger VIOLATION: trigger {} loaded at step {} among {} active, \
                     still live after {} steps",
                    w.trigger,
                    w.step,
                    w.active_at_step,
                    derivation.step_count()
                ),
                None => println!(
                    "dagger PASS: no violation on a {}-step prefix",
                    derivation.step_count()
                ),
            }
            emit(
                args.report.as_ref(),
                json!({
                    "checker": "dagger",
                    "steps": derivation.step_count(),
                    "pass": witness.is_none(),
                    "witness": witness.map(|w| json!({
                        "step": w.step,
                        "rule": w.trigger.rule_id,
                        "active_at_step": w.active_at_step,
                    })),
                }),
            )
        }
    }
}
