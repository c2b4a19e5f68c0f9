//! Command-line front door for the restricted chase workbench.
//!
//! Exit codes: 0 on success, 1 on domain errors (unreadable or malformed
//! inputs, unresolvable scripts), 2 on usage errors.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{chase, check, tm, transform};

#[derive(Parser)]
#[command(name = "chase", version, about = "A workbench for the restricted chase over existential rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a restricted chase derivation.
    Run(chase::RunArgs),
    /// Run an oblivious chase derivation (skolem nulls, no obsolescence).
    Oblivious(chase::RunArgs),
    /// Explore all restricted chase derivations up to a depth bound.
    Explore(chase::ExploreArgs),
    /// Semi-decide universal termination under the breadth-first condition.
    #[command(name = "decide-bf")]
    DecideBf(chase::DecideArgs),
    /// Turing machine tools.
    #[command(subcommand)]
    Tm(tm::TmCommand),
    /// Structural checkers.
    #[command(subcommand)]
    Check(check::CheckCommand),
    /// Knowledge-base transformations.
    #[command(subcommand)]
    Transform(transform::TransformCommand),
}

fn main() -> ExitCode {
    // die quietly when stdout is closed early (e.g. piped through head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => chase::run(args, false),
        Command::Oblivious(args) => chase::run(args, true),
        Command::Explore(args) => chase::explore(args),
        Command::DecideBf(args) => chase::decide_bf(args),
        Command::Tm(cmd) => tm::dispatch(cmd),
        Command::Check(cmd) => check::dispatch(cmd),
        Command::Transform(cmd) => transform::dispatch(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
