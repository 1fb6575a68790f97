use std::collections::BTreeMap;
use std::fmt;

use super::machine::mask_name;
use super::{Counter, CounterMachine, Instruction, Transfer, Transition};
use crate::data::Alphabet;
use crate::error::ParseError;
use crate::text::{names, Document};

struct Ctx<'a> {
    line: usize,
    basis: &'a [String],
}

impl Ctx<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::syntax(self.line, 1, msg)
    }

    /// `{x,y}` as a basis mask; `{}` is 0.
    fn mask(&self, text: &str) -> Result<u64, ParseError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| self.err(format!("expected `{{...}}`, found `{}`", text.trim())))?;
        let mut mask = 0u64;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let i = self
                .basis
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| ParseError::UnknownCounter(name.to_string()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    fn counter(&self, text: &str) -> Result<Counter, ParseError> {
        match self.mask(text)? {
            0 => Err(self.err("counters must be non-empty")),
            c => Ok(c),
        }
    }

    /// Splits `{a,b} {c}` or `{a},{b}` into brace groups.
    fn groups<'t>(&self, text: &'t str) -> Result<Vec<&'t str>, ParseError> {
        let mut out = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches([',', ' ', '\t']);
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('{') {
                return Err(self.err(format!("expected `{{`, found `{rest}`")));
            }
            let end = rest.find('}').ok_or_else(|| self.err("unclosed `{`"))?;
            out.push(&rest[..=end]);
            rest = &rest[end + 1..];
        }
        Ok(out)
    }

    fn instruction(&self, text: &str) -> Result<Instruction, ParseError> {
        let text = text.trim();
        let (op, arg) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        match op {
            "inc" => Ok(Instruction::Inc(self.counter(arg)?)),
            "dec" => Ok(Instruction::Dec(self.counter(arg)?)),
            "ifz^cap" => Ok(Instruction::IfzCap(self.mask(arg)?)),
            "nop" => Ok(Instruction::NOP),
            "transf" => {
                let mut map = BTreeMap::new();
                for entry in arg.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let (src, img) = entry
                        .split_once("->")
                        .ok_or_else(|| self.err("expected `{c}->[...]`"))?;
                    let img = img
                        .trim()
                        .strip_prefix('[')
                        .and_then(|t| t.strip_suffix(']'))
                        .ok_or_else(|| self.err("expected `[...]`"))?;
                    let targets = self
                        .groups(img)?
                        .into_iter()
                        .map(|g| self.counter(g))
                        .collect::<Result<Vec<_>, _>>()?;
                    if map.insert(self.counter(src)?, targets).is_some() {
                        return Err(self.err("counter mapped twice"));
                    }
                }
                Ok(Instruction::Transf(Transfer::explicit(map)))
            }
            other => Err(self.err(format!("unknown instruction `{other}`"))),
        }
    }
}

/// Reads the machine text format.
pub fn parse_machine(text: &str) -> Result<CounterMachine, ParseError> {
    let doc = Document::split(text, &["alphabet", "basis", "counters", "states", "initial"])?;
    let (line, letters) = doc.header("alphabet")?;
    let alphabet = Alphabet::new(names(line, letters)?)
        .map_err(|e| ParseError::syntax(line, 1, e.to_string()))?;
    let (line, b) = doc.header("basis")?;
    let basis = names(line, b)?;
    let (line, cs) = doc.header("counters")?;
    let ctx = Ctx { line, basis: &basis };
    let counters = ctx
        .groups(cs)?
        .into_iter()
        .map(|g| ctx.counter(g))
        .collect::<Result<Vec<_>, _>>()?;
    let (line, s) = doc.header("states")?;
    let states = names(line, s)?;
    let (_, init) = doc.header("initial")?;
    let state = |name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ParseError::UnknownState(name.to_string()))
    };
    let initial = state(init)?;
    let mut transitions = Vec::new();
    for &(line, text) in &doc.body {
        let ctx = Ctx { line, basis: &basis };
        let (from, rest) = text
            .split_once(char::is_whitespace)
            .ok_or_else(|| ctx.err("expected `q -label, instruction-> q'`"))?;
        let rest = rest
            .trim_start()
            .strip_prefix('-')
            .ok_or_else(|| ctx.err("expected `-` before the label"))?;
        let (label, rest) = rest.split_once(',').ok_or_else(|| ctx.err("expected `,` after the label"))?;
        let arrow = rest.rfind("->").ok_or_else(|| ctx.err("expected `->`"))?;
        let label = match label.trim() {
            "eps" => None,
            a => Some(
                alphabet
                    .letter(a)
                    .ok_or_else(|| ParseError::UnknownLetter(a.to_string()))?,
            ),
        };
        transitions.push(Transition {
            from: state(from)?,
            label,
            instr: ctx.instruction(&rest[..arrow])?,
            to: state(rest[arrow + 2..].trim())?,
        });
    }
    CounterMachine::new(alphabet, basis, counters, states, initial, transitions)
        .map_err(|e| ParseError::Invalid(e.to_string()))
}

impl CounterMachine {
    fn instruction_text(&self, instr: &Instruction) -> String {
        match instr {
            Instruction::Inc(c) => format!("inc {}", self.counter_name(*c)),
            Instruction::Dec(c) => format!("dec {}", self.counter_name(*c)),
            Instruction::IfzCap(y) => format!("ifz^cap {}", mask_name(self.basis(), *y)),
            Instruction::Transf(f) => {
                let entries: Vec<String> = self
                    .counters()
                    .iter()
                    .map(|&c| {
                        let img: Vec<String> = f.image(c).iter().map(|&d| self.counter_name(d)).collect();
                        format!("{}->[{}]", self.counter_name(c), img.join(","))
                    })
                    .collect();
                format!("transf {}", entries.join("; "))
            }
        }
    }
}

impl fmt::Display for CounterMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.alphabet().header())?;
        writeln!(f, "basis: {}", self.basis().join(" "))?;
        let cs: Vec<String> = self.counters().iter().map(|&c| self.counter_name(c)).collect();
        writeln!(f, "counters: {}", cs.join(" "))?;
        writeln!(f, "states: {}", self.states().join(" "))?;
        writeln!(f, "initial: {}", self.states()[self.initial()])?;
        for t in self.transitions() {
            let label = t.label.map_or("eps", |a| self.alphabet().name(a));
            writeln!(
                f,
                "{} -{}, {}-> {}",
                self.states()[t.from],
                label,
                self.instruction_text(&t.instr),
                self.states()[t.to]
            )?;
        }
        Ok(())
    }
}
