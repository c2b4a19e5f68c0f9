//! The chase-running subcommands: run, oblivious, explore, decide-bf.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde_json::json;

use chase_core::engine::{
    self, run_oblivious, write_dot, write_trace, Status, Strategy,
};
use chase_core::termination::{decide_bf as run_decider, explore as run_explorer, DecideOptions, Verdict};

use super::{load_kb, write_output, StrategyArgs};

#[derive(Args)]
pub struct RunArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    #[command(flatten)]
    strategy: StrategyArgs,
    /// After a script runs out, keep going with Fifo until saturation.
    #[arg(long)]
    cleanup_fifo: bool,
    /// Budget of trigger applications.
    #[arg(long, default_value_t = 1000)]
    max_steps: usize,
    /// Write a structured trace file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the final fact set as a DOT digraph.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the final fact set here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

pub fn run(args: RunArgs, oblivious: bool) -> Result<()> {
    let kb = load_kb(&args.rules, &args.facts)?;
    let strategy = args.strategy.build()?;
    let mut derivation = if oblivious {
        run_oblivious(&kb, strategy, args.max_steps)?
    } else {
        let mut d = engine::Derivation::new(&kb);
        engine::continue_chase(&mut d, strategy, args.max_steps)?;
        d
    };
    if !oblivious && args.cleanup_fifo && derivation.status() == Status::ScriptExhausted {
        let remaining = args.max_steps.saturating_sub(derivation.step_count());
        engine::continue_chase(&mut derivation, Strategy::Fifo, remaining)?;
    }
    let status = match derivation.status() {
        Status::Saturated => "saturated",
        Status::BudgetExhausted => "budget-exhausted",
        Status::ScriptExhausted => "script-exhausted",
        Status::Running => "running",
    };
    eprintln!(
        "{status} after {} trigger applications (sequence length {}), {} facts",
        derivation.step_count(),
        derivation.sequence_len(),
        derivation.result().len()
    );
    if let Some(path) = &args.trace {
        let mut out = BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        );
        write_trace(&derivation, &mut out)?;
    }
    if let Some(path) = &args.dot {
        let mut out = BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        );
        write_dot(derivation.result(), &mut out)?;
    }
    write_output(args.output.as_deref(), &derivation.result().to_text())
}

#[derive(Args)]
pub struct ExploreArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    /// Depth bound, counted in fact sets (the database alone is depth 1).
    #[arg(long)]
    depth: usize,
    /// Worker threads for parallel branch exploration.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write a JSON report of leaf counts per depth.
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn explore(args: ExploreArgs) -> Result<()> {
    let kb = load_kb(&args.rules, &args.facts)?;
    let tree = run_explorer(&kb, args.depth, args.workers.max(1));
    println!(
        "explored {} nodes to depth {}: {} saturated leaves, {} open leaves",
        tree.nodes, tree.depth_limit, tree.saturated_leaves, tree.open_leaves
    );
    for (depth, stats) in &tree.per_depth {
        println!(
            "depth {depth}: {} inner, {} saturated, {} open",
            stats.inner, stats.saturated, stats.open
        );
    }
    if let Some(path) = &args.report {
        let per_depth: Vec<_> = tree
            .per_depth
            .iter()
            .map(|(depth, stats)| {
                json!({
                    "depth": depth,
                    "inner": stats.inner,
                    "saturated": stats.saturated,
                    "open": stats.open,
                })
            })
            .collect();
        let report = json!({
            "format": "explore-report",
            "version": 1,
            "depth_limit": tree.depth_limit,
            "nodes": tree.nodes,
            "saturated_leaves": tree.saturated_leaves,
            "open_leaves": tree.open_leaves,
            "per_depth": per_depth,
        });
        std::fs::write(path, format!("{report:#}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

#[derive(Args)]
pub struct DecideArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    /// Round budget; rounds count fact sets, round 1 is the database.
    #[arg(long)]
    max_rounds: usize,
    /// Cap on the number of prefixes kept per round.
    #[arg(long, default_value_t = 200_000)]
    max_frontier: usize,
    /// Write a JSON verdict report.
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn decide_bf(args: DecideArgs) -> Result<()> {
    let kb = load_kb(&args.rules, &args.facts)?;
    let verdict = run_decider(
        &kb,
        args.max_rounds,
        DecideOptions { max_frontier: args.max_frontier },
    );
    let report = match &verdict {
        Verdict::AcceptedAt { round } => {
            println!("accepted at round {round}");
            json!({
                "format": "decide-bf-report",
                "version": 1,
                "verdict": "accepted",
                "round": round,
            })
        }
        Verdict::Undecided { rounds, resource_exceeded } => {
            if *resource_exceeded {
                println!("undecided: frontier cap hit at round {rounds}");
            } else {
                println!("undecided after {rounds} rounds");
            }
            json!({
                "format": "decide-bf-report",
                "version": 1,
                "verdict": "undecided",
                "rounds": rounds,
                "resource_exceeded": resource_exceeded,
            })
        }
    };
    if let Some(path) = &args.report {
        std::fs::write(path, format!("{report:#}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
