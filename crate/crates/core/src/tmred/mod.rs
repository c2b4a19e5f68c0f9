//! Non-deterministic Turing machines: syntax, configurations, successor
//! computation, and bounded runs.
//!
//! Machines share one initial state, never write blanks, and have no
//! accepting or rejecting states; only halting behaviour matters here.
//! A designated state `qloop` is tracked for recurrence counting.

mod reduction;

pub use reduction::{
    compile_ruleset, encode_config, Reduction, RuleOrigin, PRED_BRAKE, PRED_CL, PRED_CR,
    PRED_END, PRED_F, PRED_NEXT_BR, PRED_R, PRED_REAL,
};

use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TmError {
    #[error("machine file {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("word symbol {0} is not in the tape alphabet")]
    BadWordSymbol(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Left,
    Right,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dir::Left => write!(f, "L"),
            Dir::Right => write!(f, "R"),
        }
    }
}

/// A tape cell content: a letter of the alphabet or the blank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TapeSymbol {
    Letter(String),
    Blank,
}

impl TapeSymbol {
    pub fn letter(s: impl Into<String>) -> Self {
        TapeSymbol::Letter(s.into())
    }
}

impl fmt::Display for TapeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSymbol::Letter(s) => write!(f, "{s}"),
            TapeSymbol::Blank => write!(f, "B"),
        }
    }
}

/// One transition: in state `from` reading `read`, write `write`, move
/// `dir`, and switch to state `to`. Written symbols are letters, never
/// blanks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeltaEntry {
    pub from: String,
    pub read: TapeSymbol,
    pub to: String,
    pub write: String,
    pub dir: Dir,
}

/// A non-deterministic Turing machine. The first listed state is the
/// initial one; `qloop` is the designated recurrence state.
#[derive(Debug, Clone)]
pub struct Machine {
    states: Vec<String>,
    qloop: String,
    gamma: Vec<String>,
    delta: Vec<DeltaEntry>,
}

impl Machine {
    pub fn new(
        states: Vec<String>,
        qloop: String,
        gamma: Vec<String>,
        delta: Vec<DeltaEntry>,
    ) -> Result<Self, TmError> {
        if states.is_empty() {
            return Err(TmError::Invalid("a machine needs at least one state".into()));
        }
        if !states.contains(&qloop) {
            return Err(TmError::Invalid(format!("qloop state {qloop} is not a state")));
        }
        if gamma.iter().any(|g| g == "B") {
            return Err(TmError::Invalid("the blank B cannot be part of the alphabet".into()));
        }
        for entry in &delta {
            if !states.contains(&entry.from) || !states.contains(&entry.to) {
                return Err(TmError::Invalid(format!(
                    "transition from {} uses an unknown state",
                    entry.from
                )));
            }
            if !gamma.contains(&entry.write) {
                return Err(TmError::Invalid(format!(
                    "machines do not write blanks or unknown symbols: {}",
                    entry.write
                )));
            }
            if let TapeSymbol::Letter(read) = &entry.read {
                if !gamma.contains(read) {
                    return Err(TmError::Invalid(format!("unknown read symbol {read}")));
                }
            }
        }
        // delta maps to a set of transitions; repeated entries collapse
        let mut deduped = Vec::new();
        for entry in delta {
            if !deduped.contains(&entry) {
                deduped.push(entry);
            }
        }
        Ok(Machine { states, qloop, gamma, delta: deduped })
    }

    pub fn initial_state(&self) -> &str {
        &self.states[0]
    }

    pub fn qloop(&self) -> &str {
        &self.qloop
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn gamma(&self) -> &[String] {
        &self.gamma
    }

    /// The alphabet extended with the blank, in declaration order.
    pub fn letters_with_blank(&self) -> Vec<TapeSymbol> {
        let mut out: Vec<TapeSymbol> =
            self.gamma.iter().map(|g| TapeSymbol::letter(g.clone())).collect();
        out.push(TapeSymbol::Blank);
        out
    }

    pub fn delta(&self) -> &[DeltaEntry] {
        &self.delta
    }

    pub fn transitions_from(&self, state: &str, read: &TapeSymbol) -> Vec<&DeltaEntry> {
        self.delta
            .iter()
            .filter(|e| e.from == state && &e.read == read)
            .collect()
    }

    /// The starting configuration on a word over {0, 1}.
    pub fn start_config(&self, word: &str) -> Result<Configuration, TmError> {
        let mut tape = Vec::new();
        for ch in word.chars() {
            let s = ch.to_string();
            if s != "0" && s != "1" {
                return Err(TmError::BadWordSymbol(s));
            }
            if !self.gamma.contains(&s) {
                return Err(TmError::BadWordSymbol(s));
            }
            tape.push(TapeSymbol::Letter(s));
        }
        tape.push(TapeSymbol::Blank);
        Configuration::new(tape, 1, self.initial_state().to_string())
    }

    /// All successor configurations of `c`, honouring the rule that a left
    /// move is only possible from position 2 onwards. Each successor has one
    /// more tape cell than `c`.
    ///
    /// A transition is also skipped when writing would break the
    /// blank-suffix tape invariant; this can only happen when the head sits
    /// two or more cells inside the blank suffix, a situation no run from a
    /// starting configuration reaches.
    pub fn next_configs(&self, c: &Configuration) -> Vec<Configuration> {
        let mut out = Vec::new();
        for entry in self.transitions_from(&c.state, c.symbol_at(c.head)) {
            if entry.dir == Dir::Left && c.head < 2 {
                continue;
            }
            if let Ok(successor) = apply_transition(c, entry) {
                if !out.contains(&successor) {
                    out.push(successor);
                }
            }
        }
        out
    }
}

/// The configuration reached from `c` by `entry`: the head cell is
/// overwritten, the tape grows by one blank cell, and the head moves.
pub fn apply_transition(c: &Configuration, entry: &DeltaEntry) -> Result<Configuration, TmError> {
    if entry.dir == Dir::Left && c.head < 2 {
        return Err(TmError::Invalid("cannot move left from the first cell".into()));
    }
    let mut tape = c.tape.clone();
    tape[c.head - 1] = TapeSymbol::letter(entry.write.clone());
    tape.push(TapeSymbol::Blank);
    let head = match entry.dir {
        Dir::Left => c.head - 1,
        Dir::Right => c.head + 1,
    };
    Configuration::new(tape, head, entry.to.clone())
}

/// A machine configuration: a tape of `n` cells whose last cell is blank
/// and whose blanks are suffix-closed, a head position in 1..=n, and a
/// state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    tape: Vec<TapeSymbol>,
    head: usize,
    state: String,
}

impl Configuration {
    pub fn new(tape: Vec<TapeSymbol>, head: usize, state: String) -> Result<Self, TmError> {
        if tape.is_empty() {
            return Err(TmError::Invalid("a configuration has at least one cell".into()));
        }
        if tape.last() != Some(&TapeSymbol::Blank) {
            return Err(TmError::Invalid("the last tape cell must be blank".into()));
        }
        let mut seen_blank = false;
        for cell in &tape {
            match cell {
                TapeSymbol::Blank => seen_blank = true,
                TapeSymbol::Letter(_) if seen_blank => {
                    return Err(TmError::Invalid(
                        "letters may not occur after a blank".into(),
                    ))
                }
                TapeSymbol::Letter(_) => {}
            }
        }
        if head == 0 || head > tape.len() {
            return Err(TmError::Invalid(format!(
                "head position {head} outside 1..={}",
                tape.len()
            )));
        }
        Ok(Configuration { tape, head, state })
    }

    pub fn len(&self) -> usize {
        self.tape.len()
    }

    /// Configurations always have at least one (blank) cell.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn head(&self) -> usize {
        self.head
    }

    pub fn state(&self) -> &str {
        &self.state
    }

    pub fn tape(&self) -> &[TapeSymbol] {
        &self.tape
    }

    /// The cell content at 1-based position `i`; positions beyond the tape
    /// read as blank.
    pub fn symbol_at(&self, i: usize) -> &TapeSymbol {
        self.tape.get(i - 1).unwrap_or(&TapeSymbol::Blank)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},", self.tape.len())?;
        for cell in &self.tape {
            write!(f, "{cell}")?;
        }
        write!(f, ",{},{}>", self.head, self.state)
    }
}

/// How a bounded run resolves non-determinism.
#[derive(Debug, Clone, Copy)]
pub enum RunPolicy {
    /// Take the first successor in declaration order.
    Canonical,
    Random { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct MachineRun {
    pub trace: Vec<Configuration>,
    /// Configurations in the trace whose state equals the counted state.
    pub occurrences: usize,
    /// Whether the run reached a configuration without successors within
    /// the budget.
    pub halted: bool,
}

/// Runs the machine for at most `max_steps` steps from `c0`, counting
/// configurations whose state is `count_state`.
pub fn run_machine(
    m: &Machine,
    c0: &Configuration,
    max_steps: usize,
    count_state: &str,
    policy: RunPolicy,
) -> MachineRun {
    let mut rng = match policy {
        RunPolicy::Canonical => None,
        RunPolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let mut trace = vec![c0.clone()];
    let mut halted = false;
    for _ in 0..max_steps {
        let current = trace.last().unwrap();
        let next = m.next_configs(current);
        if next.is_empty() {
            halted = true;
            break;
        }
        let pick = match &mut rng {
            None => 0,
            Some(rng) => rng.gen_range(0..next.len()),
        };
        trace.push(next[pick].clone());
    }
    let occurrences = trace.iter().filter(|c| c.state() == count_state).count();
    MachineRun { trace, occurrences, halted }
}

/// Parses the machine file format:
///
/// ```text
/// states: q0 qloop
/// qloop: qloop
/// gamma: 0 1
/// delta: q0,0 -> qloop,1,R
/// ```
///
/// The first listed state is the initial one. `%` or `#` start comments.
pub fn parse_machine(text: &str) -> Result<Machine, TmError> {
    let mut states: Option<Vec<String>> = None;
    let mut qloop: Option<String> = None;
    let mut gamma: Option<Vec<String>> = None;
    let mut delta: Vec<DeltaEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split(['%', '#']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let err = |msg: String| TmError::Parse { line: lineno, msg };
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected 'key: value'".into()))?;
        let rest = rest.trim();
        match key.trim() {
            "states" => states = Some(rest.split_whitespace().map(String::from).collect()),
            "qloop" => qloop = Some(rest.to_string()),
            "gamma" => gamma = Some(rest.split_whitespace().map(String::from).collect()),
            "delta" => {
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| err("expected 'q,a -> q,b,L|R'".into()))?;
                let lhs: Vec<&str> = lhs.trim().split(',').map(str::trim).collect();
                let rhs: Vec<&str> = rhs.trim().split(',').map(str::trim).collect();
                if lhs.len() != 2 || rhs.len() != 3 {
                    return Err(err("expected 'q,a -> q,b,L|R'".into()));
                }
                let read = if lhs[1] == "B" {
                    TapeSymbol::Blank
                } else {
                    TapeSymbol::letter(lhs[1])
                };
                let dir = match rhs[2] {
                    "L" => Dir::Left,
                    "R" => Dir::Right,
                    other => return Err(err(format!("bad direction {other}"))),
                };
                delta.push(DeltaEntry {
                    from: lhs[0].to_string(),
                    read,
                    to: rhs[0].to_string(),
                    write: rhs[1].to_string(),
                    dir,
                });
            }
            other => return Err(err(format!("unknown key {other}"))),
        }
    }
    let states = states.ok_or_else(|| TmError::Invalid("missing states line".into()))?;
    let qloop = qloop.ok_or_else(|| TmError::Invalid("missing qloop line".into()))?;
    let gamma = gamma.ok_or_else(|| TmError::Invalid("missing gamma line".into()))?;
    Machine::new(states, qloop, gamma, delta)
}

/// The machine of the worked reduction example: two states alternating via
/// four transitions; its only run on the word `0` visits qloop infinitely
/// often.
#[cfg(test)]
pub(crate) fn example_machine() -> Machine {
    parse_machine(
        "states: q0 qloop\n\
         qloop: qloop\n\
         gamma: 0 1\n\
         delta: q0,0 -> qloop,1,R\n\
         delta: qloop,B -> q0,1,L\n\
         delta: q0,1 -> qloop,1,R\n\
         delta: qloop,1 -> q0,1,L\n",
    )
    .unwrap()
}
