//! Turing machine subcommands: compile, encode, run.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Subcommand};

use chase_core::tmred::{compile_ruleset, encode_config, run_machine, RunPolicy};

use super::{load_machine, write_output, ConfigArgs};

#[derive(Subcommand)]
pub enum TmCommand {
    /// Compile a machine into its rule set (.rls).
    Compile(CompileArgs),
    /// Encode a configuration as a database (.fct).
    Encode(EncodeArgs),
    /// Run the machine for a bounded number of steps.
    Run(RunArgs),
}

#[derive(Args)]
pub struct CompileArgs {
    #[arg(long)]
    machine: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct EncodeArgs {
    #[arg(long)]
    machine: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RunArgs {
    #[arg(long)]
    machine: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    /// State whose occurrences in the trace are counted.
    #[arg(long)]
    count_state: String,
    /// How non-determinism is resolved.
    #[arg(long, default_value = "canonical", value_parser = ["canonical", "random"])]
    policy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn dispatch(cmd: TmCommand) -> Result<()> {
    match cmd {
        TmCommand::Compile(args) => {
            let machine = load_machine(&args.machine)?;
            let reduction = compile_ruleset(&machine)?;
            eprintln!("{} rules", reduction.rules().len());
            write_output(args.output.as_deref(), &reduction.rules().to_string())
        }
        TmCommand::Encode(args) => {
            let machine = load_machine(&args.machine)?;
            let config = args.config.build(&machine)?;
            let facts = encode_config(&config);
            eprintln!("{} facts for {config}", facts.len());
            write_output(args.output.as_deref(), &facts.to_text())
        }
        TmCommand::Run(args) => {
            let machine = load_machine(&args.machine)?;
            let config = args.config.build(&machine)?;
            let policy = match args.policy.as_str() {
                "random" => RunPolicy::Random { seed: args.seed },
                _ => RunPolicy::Canonical,
            };
            let run = run_machine(&machine, &config, args.max_steps, &args.count_state, policy);
            for (i, c) in run.trace.iter().enumerate() {
                println!("{i}: {c}");
            }
            println!(
                "{} occurrences of {}; {}",
                run.occurrences,
                args.count_state,
                if run.halted { "halted" } else { "budget exhausted" }
            );
            Ok(())
        }
    }
}
