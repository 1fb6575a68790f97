use std::collections::HashMap;

use super::{AlternatingAutomaton, Flag, PosBool};
use crate::data::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::ltl::Formula;

struct States<'f> {
    list: Vec<&'f Formula>,
    index: HashMap<&'f Formula, usize>,
}

impl<'f> States<'f> {
    fn add(&mut self, f: &'f Formula) {
        if !self.index.contains_key(f) {
            self.index.insert(f, self.list.len());
            self.list.push(f);
        }
    }

    fn collect(&mut self, f: &'f Formula) {
        match f {
            Formula::Next(a) => {
                self.add(a);
                self.collect(a);
            }
            Formula::Release(a, b) => {
                self.add(f);
                self.collect(a);
                self.collect(b);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.collect(a);
                self.collect(b);
            }
            Formula::Freeze(a) => self.collect(a),
            _ => {}
        }
    }

    fn delta(&self, f: &Formula, a: Letter, flag: Flag) -> PosBool {
        match f {
            Formula::Atom(b) if *b == a => PosBool::Top,
            Formula::Atom(_) | Formula::Bot => PosBool::Bot,
            Formula::Top => PosBool::Top,
            Formula::Up if flag == Flag::Up => PosBool::Top,
            Formula::NotUp if flag == Flag::NotUp => PosBool::Top,
            Formula::Up | Formula::NotUp => PosBool::Bot,
            Formula::And(x, y) => PosBool::and(self.delta(x, a, flag), self.delta(y, a, flag)),
            Formula::Or(x, y) => PosBool::or(self.delta(x, a, flag), self.delta(y, a, flag)),
            Formula::Next(x) => PosBool::State(self.index[&**x]),
            Formula::Release(x, y) => PosBool::and(
                self.delta(y, a, flag),
                PosBool::or(self.delta(x, a, flag), PosBool::State(self.index[f])),
            ),
            Formula::Freeze(x) => self.delta(x, a, Flag::Up).bind_all(),
        }
    }
}

/// Translates a sentence into an automaton with the same language. States
/// are the sentence itself, every `ψ` under an `X`, and every `R`
/// subformula, identified up to structural equality; `q0` is the sentence.
pub fn ltl_to_ara(f: &Formula, alphabet: &Alphabet) -> Result<AlternatingAutomaton> {
    if !f.is_sentence() {
        return Err(Error::Invalid("formula has a free occurrence of up/nup".into()));
    }
    if let Some(a) = f.max_letter() {
        if a >= alphabet.len() {
            return Err(Error::OutOfRange {
                index: a,
                len: alphabet.len(),
            });
        }
    }
    let mut states = States {
        list: Vec::new(),
        index: HashMap::new(),
    };
    states.add(f);
    states.collect(f);
    let mut out = AlternatingAutomaton::with_numbered_states(alphabet.clone(), states.list.len(), 0)?;
    for (q, psi) in states.list.iter().enumerate() {
        for a in alphabet.letters() {
            for flag in Flag::BOTH {
                out.set_delta(q, a, flag, states.delta(psi, a, flag))?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_formula;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn example_sentence_has_three_states() {
        let al = abc();
        let f = parse_formula("G (b | c | down X G (a | b | X G (a | c | nup)))", &al).unwrap();
        assert_eq!(ltl_to_ara(&f, &al).unwrap().state_count(), 3);
    }

    #[test]
    fn always_a() {
        let al = abc();
        let a = ltl_to_ara(&parse_formula("G a", &al).unwrap(), &al).unwrap();
        assert_eq!(a.state_count(), 1);
        for flag in Flag::BOTH {
            assert_eq!(*a.delta(0, 0, flag), PosBool::State(0));
            assert_eq!(*a.delta(0, 1, flag), PosBool::Bot);
        }
    }

    #[test]
    fn atom() {
        let al = abc();
        let a = ltl_to_ara(&parse_formula("a", &al).unwrap(), &al).unwrap();
        assert_eq!(a.state_count(), 1);
        assert_eq!(*a.delta(0, 0, Flag::NotUp), PosBool::Top);
        assert_eq!(*a.delta(0, 2, Flag::Up), PosBool::Bot);
    }

    #[test]
    fn freeze_binds_successors() {
        let al = abc();
        let a = ltl_to_ara(&parse_formula("down X up", &al).unwrap(), &al).unwrap();
        assert_eq!(a.state_count(), 2);
        assert_eq!(*a.delta(0, 1, Flag::NotUp), PosBool::Down(1));
        assert_eq!(*a.delta(1, 1, Flag::NotUp), PosBool::Bot);
        assert!(ltl_to_ara(&parse_formula("X up", &al).unwrap(), &al).is_err());
    }
}
