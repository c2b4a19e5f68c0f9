pub mod chase;
pub mod check;
pub mod tm;
pub mod transform;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chase_core::engine::{Strategy, TriggerDescriptor};
use chase_core::model::{parse_facts, parse_rules, KnowledgeBase, Term};
use chase_core::tmred::{parse_machine, Configuration, Machine, TapeSymbol};

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_kb(rules: &Path, facts: &Path) -> Result<KnowledgeBase> {
    let rules = parse_rules(&read_to_string(rules)?)
        .with_context(|| format!("in rule file {}", rules.display()))?;
    let database = parse_facts(&read_to_string(facts)?)
        .with_context(|| format!("in fact file {}", facts.display()))?;
    KnowledgeBase::new(rules, database).context("inconsistent knowledge base")
}

pub fn load_machine(path: &Path) -> Result<Machine> {
    parse_machine(&read_to_string(path)?)
        .with_context(|| format!("in machine file {}", path.display()))
}

/// Terms on the command line: `_:id` names a null, anything else a constant.
pub fn parse_cli_term(text: &str) -> Term {
    match text.strip_prefix("_:") {
        Some(id) => Term::null(id),
        None => Term::constant(text),
    }
}

/// A script file has one descriptor per line: `rule_id [var=term ...]`.
/// `%` and `#` start comments.
pub fn parse_script(text: &str) -> Result<Vec<TriggerDescriptor>> {
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split(['%', '#']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let rule_id = parts.next().expect("non-empty line").to_string();
        let mut bindings = Vec::new();
        for part in parts {
            let Some((var, term)) = part.split_once('=') else {
                bail!("script line {}: expected var=term, found {part}", idx + 1);
            };
            bindings.push((var.to_string(), parse_cli_term(term)));
        }
        steps.push(TriggerDescriptor::new(rule_id, bindings));
    }
    Ok(steps)
}

#[derive(clap::Args)]
pub struct StrategyArgs {
    /// Trigger-selection strategy.
    #[arg(long, default_value = "fifo", value_parser = ["fifo", "dfs", "random", "script"])]
    pub strategy: String,
    /// Script file for --strategy script.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// Seed for --strategy random; all randomness flows from here.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl StrategyArgs {
    pub fn build(&self) -> Result<Strategy> {
        Ok(match self.strategy.as_str() {
            "fifo" => Strategy::Fifo,
            "dfs" => Strategy::Dfs,
            "random" => Strategy::Random { seed: self.seed },
            "script" => {
                let Some(path) = &self.script else {
                    bail!("--strategy script needs --script PATH");
                };
                Strategy::Script { steps: parse_script(&read_to_string(path)?)? }
            }
            other => bail!("unknown strategy {other}"),
        })
    }
}

/// Configuration selection: either a word for the starting configuration or
/// an explicit tape/head/state triple.
#[derive(clap::Args)]
pub struct ConfigArgs {
    /// Input word over 0/1; selects the starting configuration.
    #[arg(long)]
    pub word: Option<String>,
    /// Explicit tape, comma-separated symbols with B for blank: 1,0,B
    #[arg(long)]
    pub tape: Option<String>,
    /// Head position (1-based) for --tape.
    #[arg(long)]
    pub head: Option<usize>,
    /// Machine state for --tape.
    #[arg(long)]
    pub state: Option<String>,
}

impl ConfigArgs {
    pub fn build(&self, machine: &Machine) -> Result<Configuration> {
        match (&self.word, &self.tape) {
            (Some(word), None) => Ok(machine.start_config(word)?),
            (None, Some(tape)) => {
                let cells: Vec<TapeSymbol> = tape
                    .split(',')
                    .map(|s| {
                        let s = s.trim();
                        if s == "B" {
                            TapeSymbol::Blank
                        } else {
                            TapeSymbol::letter(s)
                        }
                    })
                    .collect();
                let head = self.head.context("--tape needs --head")?;
                let state = self.state.clone().context("--tape needs --state")?;
                Ok(Configuration::new(cells, head, state)?)
            }
            _ => bail!("give exactly one of --word or --tape/--head/--state"),
        }
    }
}

pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
