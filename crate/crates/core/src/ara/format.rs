use std::fmt;

use super::{AlternatingAutomaton, Flag, PosBool};
use crate::data::Alphabet;
use crate::error::ParseError;
use crate::text::{names, tokens, Document};

struct FormulaParser<'a> {
    toks: Vec<(usize, String)>,
    pos: usize,
    line: usize,
    offset: usize,
    states: &'a [String],
}

impl FormulaParser<'_> {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|(_, t)| t.as_str())
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let col = self
            .toks
            .get(self.pos)
            .map(|(c, _)| *c)
            .unwrap_or_else(|| self.toks.last().map_or(1, |(c, t)| c + t.len()));
        ParseError::syntax(self.line, self.offset + col, msg)
    }

    fn expect(&mut self, t: &str) -> Result<(), ParseError> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{t}`")))
        }
    }

    fn state(&mut self) -> Result<usize, ParseError> {
        let Some(name) = self.peek() else {
            return Err(self.error("expected a state"));
        };
        let q = self
            .states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ParseError::UnknownState(name.to_string()))?;
        self.pos += 1;
        Ok(q)
    }

    fn or(&mut self) -> Result<PosBool, ParseError> {
        let mut f = self.and()?;
        while self.peek() == Some("|") {
            self.pos += 1;
            f = PosBool::Or(Box::new(f), Box::new(self.and()?));
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<PosBool, ParseError> {
        let mut f = self.primary()?;
        while self.peek() == Some("&") {
            self.pos += 1;
            f = PosBool::And(Box::new(f), Box::new(self.primary()?));
        }
        Ok(f)
    }

    fn primary(&mut self) -> Result<PosBool, ParseError> {
        match self.peek() {
            Some("(") => {
                self.pos += 1;
                let f = self.or()?;
                self.expect(")")?;
                Ok(f)
            }
            Some("true") => {
                self.pos += 1;
                Ok(PosBool::Top)
            }
            Some("false") => {
                self.pos += 1;
                Ok(PosBool::Bot)
            }
            Some("d") if self.toks.get(self.pos + 1).map(|(_, t)| t.as_str()) == Some("(") => {
                self.pos += 2;
                let q = self.state()?;
                self.expect(")")?;
                Ok(PosBool::Down(q))
            }
            _ => self.state().map(PosBool::State),
        }
    }
}

fn parse_posbool(
    text: &str,
    line: usize,
    offset: usize,
    states: &[String],
) -> Result<PosBool, ParseError> {
    let mut p = FormulaParser {
        toks: tokens(text),
        pos: 0,
        line,
        offset,
        states,
    };
    let f = p.or()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected token"));
    }
    Ok(f)
}

/// Reads the automaton text format. Entries that are not listed are `⊥`.
pub fn parse_automaton(text: &str) -> Result<AlternatingAutomaton, ParseError> {
    let doc = Document::split(text, &["alphabet", "states", "initial"])?;
    let (line, letters) = doc.header("alphabet")?;
    let alphabet = Alphabet::new(names(line, letters)?)
        .map_err(|e| ParseError::syntax(line, 1, e.to_string()))?;
    let (line, state_text) = doc.header("states")?;
    let states = names(line, state_text)?;
    let (line, init) = doc.header("initial")?;
    let initial = states
        .iter()
        .position(|s| s == init)
        .ok_or_else(|| ParseError::UnknownState(init.to_string()))?;
    let mut out = AlternatingAutomaton::new(alphabet, states.clone(), initial)
        .map_err(|e| ParseError::syntax(line, 1, e.to_string()))?;
    let mut seen = std::collections::HashSet::new();
    for &(line, text) in &doc.body {
        let Some(arrow) = text.find("->") else {
            return Err(ParseError::syntax(line, 1, "expected `q, a, flag -> formula`"));
        };
        let fields: Vec<&str> = text[..arrow].split(',').map(str::trim).collect();
        let [q, a, flag] = fields[..] else {
            return Err(ParseError::syntax(line, 1, "expected three fields before `->`"));
        };
        let q = out.state(q).ok_or_else(|| ParseError::UnknownState(q.to_string()))?;
        let a = out
            .alphabet()
            .letter(a)
            .ok_or_else(|| ParseError::UnknownLetter(a.to_string()))?;
        let flags: &[Flag] = match flag {
            "up" => &[Flag::Up],
            "nup" => &[Flag::NotUp],
            "*" => &Flag::BOTH,
            other => {
                return Err(ParseError::syntax(
                    line,
                    1,
                    format!("expected `up`, `nup` or `*`, found `{other}`"),
                ))
            }
        };
        let phi = parse_posbool(&text[arrow + 2..], line, arrow + 2, &states)?;
        for &f in flags {
            if !seen.insert((q, a, f)) {
                return Err(ParseError::syntax(line, 1, "duplicate transition"));
            }
            out.set_delta(q, a, f, phi.clone())
                .map_err(|e| ParseError::Invalid(e.to_string()))?;
        }
    }
    Ok(out)
}

impl fmt::Display for AlternatingAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.alphabet.header())?;
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        for q in 0..self.states.len() {
            for a in self.alphabet.letters() {
                let up = self.delta(q, a, Flag::Up);
                let nup = self.delta(q, a, Flag::NotUp);
                let (qn, an) = (&self.states[q], self.alphabet.name(a));
                if up == nup {
                    if *up != PosBool::Bot {
                        writeln!(f, "{qn}, {an}, * -> {}", up.display(&self.states))?;
                    }
                    continue;
                }
                if *up != PosBool::Bot {
                    writeln!(f, "{qn}, {an}, up -> {}", up.display(&self.states))?;
                }
                if *nup != PosBool::Bot {
                    writeln!(f, "{qn}, {an}, nup -> {}", nup.display(&self.states))?;
                }
            }
        }
        Ok(())
    }
}
