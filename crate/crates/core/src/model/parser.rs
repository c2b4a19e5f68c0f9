//! Parsers for the rule (.rls) and fact (.fct) languages.
//!
//! One statement per `.`; `%` starts a comment running to end of line.
//! `?x` is a universal variable, `!y` an existential one, lowercase
//! identifiers are constants, predicates are capitalized, and `_:id` names a
//! null (only meaningful in derived fact sets, never in databases or rules).
//! A rule may carry an explicit id as a `label:` prefix; absent ids are
//! assigned `r1`, `r2`, ... in file order.

use std::collections::HashMap;
use std::iter::Peekable;
use std::str::CharIndices;

use super::{Atom, FactSet, ModelError, Rule, RuleSet, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Scanner<'a> {
    chars: Peekable<CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { chars: src.char_indices().peekable(), line: 1, col: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        let mut out = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                out.push(c);
                self.bump();
            }
            Some(c) => return Err(self.error(format!("expected identifier, found '{c}'"))),
            None => return Err(self.error("expected identifier, found end of input")),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self, allow_vars: bool, allow_nulls: bool) -> Result<Term, ParseError> {
        match self.peek() {
            Some('?') => {
                if !allow_vars {
                    return Err(self.error("variables are not allowed in facts"));
                }
                self.bump();
                Ok(Term::universal(self.ident()?))
            }
            Some('!') => {
                if !allow_vars {
                    return Err(self.error("variables are not allowed in facts"));
                }
                self.bump();
                Ok(Term::existential(self.ident()?))
            }
            Some('_') => {
                self.bump();
                self.expect(':')?;
                let id = self.ident()?;
                if !allow_nulls {
                    return Err(self.error(format!("null _:{id} is not allowed here")));
                }
                Ok(Term::null(id))
            }
            Some(c) if c.is_ascii_lowercase() => Ok(Term::constant(self.ident()?)),
            Some(c) => Err(self.error(format!("expected a term, found '{c}'"))),
            None => Err(self.error("expected a term, found end of input")),
        }
    }

    fn atom(
        &mut self,
        allow_vars: bool,
        allow_nulls: bool,
        arities: &mut HashMap<String, usize>,
    ) -> Result<Atom, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_uppercase() => {}
            Some(c) => {
                return Err(self.error(format!("expected a predicate (capitalized), found '{c}'")))
            }
            None => return Err(self.error("expected a predicate, found end of input")),
        }
        let predicate = self.ident()?;
        let mut args = Vec::new();
        self.skip_trivia();
        if self.peek() == Some('(') {
            self.bump();
            self.skip_trivia();
            if self.peek() != Some(')') {
                loop {
                    self.skip_trivia();
                    args.push(self.term(allow_vars, allow_nulls)?);
                    self.skip_trivia();
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some(')') => break,
                        Some(c) => {
                            return Err(self.error(format!("expected ',' or ')', found '{c}'")))
                        }
                        None => return Err(self.error("unclosed argument list")),
                    }
                }
            }
            self.expect(')')?;
        }
        match arities.get(&predicate) {
            Some(&n) if n != args.len() => {
                return Err(self.error(format!(
                    "predicate {predicate} used with arity {} but previously with {n}",
                    args.len()
                )));
            }
            Some(_) => {}
            None => {
                arities.insert(predicate.clone(), args.len());
            }
        }
        Ok(Atom::new(predicate, args))
    }
}

/// Parses a rule file. Rule ids are assigned in file order when absent.
pub fn parse_rules(text: &str) -> Result<RuleSet, ModelError> {
    let mut scanner = Scanner::new(text);
    let mut arities = HashMap::new();
    let mut rules = Vec::new();
    loop {
        scanner.skip_trivia();
        if scanner.peek().is_none() {
            break;
        }
        let (line, col) = (scanner.line, scanner.col);
        let label = match scanner.peek() {
            Some(c) if c.is_ascii_lowercase() || c == '_' => {
                let name = scanner.ident()?;
                scanner.skip_trivia();
                scanner.expect(':')?;
                scanner.skip_trivia();
                Some(name)
            }
            _ => None,
        };
        let mut body = Vec::new();
        if scanner.peek() != Some('-') {
            loop {
                body.push(scanner.atom(true, false, &mut arities)?);
                scanner.skip_trivia();
                match scanner.peek() {
                    Some(',') => {
                        scanner.bump();
                        scanner.skip_trivia();
                    }
                    Some('-') => break,
                    Some(c) => {
                        return Err(scanner.error(format!("expected ',' or '->', found '{c}'")).into())
                    }
                    None => return Err(scanner.error("expected '->', found end of input").into()),
                }
            }
        }
        scanner.expect('-')?;
        scanner.expect('>')?;
        let mut head = Vec::new();
        loop {
            scanner.skip_trivia();
            if scanner.peek() == Some('.') {
                break;
            }
            head.push(scanner.atom(true, false, &mut arities)?);
            scanner.skip_trivia();
            match scanner.peek() {
                Some(',') => {
                    scanner.bump();
                }
                Some('.') => break,
                Some(c) => {
                    return Err(scanner.error(format!("expected ',' or '.', found '{c}'")).into())
                }
                None => return Err(scanner.error("expected '.', found end of input").into()),
            }
        }
        scanner.expect('.')?;
        let id = label.unwrap_or_else(|| format!("r{}", rules.len() + 1));
        let rule = Rule::new(id, body, head).map_err(|e| ParseError {
            line,
            col,
            msg: e.to_string(),
        })?;
        rules.push(rule);
    }
    RuleSet::new(rules)
}

fn parse_fact_text(text: &str, allow_nulls: bool) -> Result<FactSet, ModelError> {
    let mut scanner = Scanner::new(text);
    let mut arities = HashMap::new();
    let mut facts = FactSet::new();
    loop {
        scanner.skip_trivia();
        if scanner.peek().is_none() {
            break;
        }
        let atom = scanner.atom(false, allow_nulls, &mut arities)?;
        scanner.skip_trivia();
        scanner.expect('.')?;
        facts.insert(atom)?;
    }
    Ok(facts)
}

/// Parses a fact file into a null-free fact set (a database).
pub fn parse_facts(text: &str) -> Result<FactSet, ModelError> {
    parse_fact_text(text, false)
}

/// Parses a fact set that may contain nulls (`_:id`), as written by the
/// trace and result exporters.
pub fn parse_fact_set(text: &str) -> Result<FactSet, ModelError> {
    parse_fact_text(text, true)
}

/// Parses a single ground atom, nulls allowed. Used to name state atoms on
/// the command line.
pub fn parse_atom(text: &str) -> Result<Atom, ModelError> {
    let mut scanner = Scanner::new(text);
    let mut arities = HashMap::new();
    scanner.skip_trivia();
    let atom = scanner.atom(false, true, &mut arities)?;
    scanner.skip_trivia();
    if let Some(c) = scanner.peek() {
        if c != '.' {
            return Err(scanner.error(format!("unexpected trailing '{c}'")).into());
        }
    }
    Ok(atom)
}
