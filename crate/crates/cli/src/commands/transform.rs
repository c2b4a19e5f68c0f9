//! Knowledge-base transformations.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};

use chase_core::model::RuleSet;
use chase_core::termination::internalize;

use super::{load_kb, write_output};

#[derive(Subcommand)]
pub enum TransformCommand {
    /// Fold the database into the rule set (primed predicates plus an
    /// empty-body initialization rule).
    Internalize(InternalizeArgs),
}

#[derive(Args)]
pub struct InternalizeArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    facts: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

pub fn dispatch(cmd: TransformCommand) -> Result<()> {
    match cmd {
        TransformCommand::Internalize(args) => {
            let kb = load_kb(&args.rules, &args.facts)?;
            let rules = internalize(&kb)?;
            let rules = RuleSet::new(rules)?;
            eprintln!("{} rules", rules.len());
            write_output(args.output.as_deref(), &rules.to_string())
        }
    }
}
