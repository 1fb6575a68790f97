use std::collections::HashMap;

use super::Formula;
use crate::ara::{ltl_to_ara, run_exists};
use crate::data::{Alphabet, DataWord};
use crate::error::{Error, Result};

/// Verdict of a sentence on a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrefixVerdict {
    /// No data ω-word extending the prefix satisfies the sentence.
    Falsified,
    Undetermined,
}

fn check_input(f: &Formula, w: &DataWord) -> Result<()> {
    if !f.is_sentence() {
        return Err(Error::Invalid("formula has a free occurrence of up/nup".into()));
    }
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(())
}

/// Falsified iff the translated automaton has no run over the whole prefix.
pub fn evaluate_prefix(f: &Formula, alphabet: &Alphabet, w: &DataWord) -> Result<PrefixVerdict> {
    check_input(f, w)?;
    let automaton = ltl_to_ara(f, alphabet)?;
    Ok(if run_exists(&automaton, w)? {
        PrefixVerdict::Undetermined
    } else {
        PrefixVerdict::Falsified
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kleene {
    False,
    Unknown,
    True,
}

impl Kleene {
    fn and(self, other: Kleene) -> Kleene {
        match (self, other) {
            (Kleene::False, _) | (_, Kleene::False) => Kleene::False,
            (Kleene::True, Kleene::True) => Kleene::True,
            _ => Kleene::Unknown,
        }
    }

    fn or(self, other: Kleene) -> Kleene {
        match (self, other) {
            (Kleene::True, _) | (_, Kleene::True) => Kleene::True,
            (Kleene::False, Kleene::False) => Kleene::False,
            _ => Kleene::Unknown,
        }
    }

    fn from(b: bool) -> Kleene {
        if b {
            Kleene::True
        } else {
            Kleene::False
        }
    }
}

struct Monitor<'w> {
    word: &'w DataWord,
    memo: HashMap<(*const Formula, usize, usize), Kleene>,
}

impl Monitor<'_> {
    /// Three-valued satisfaction at position `i` with register class `reg`;
    /// anything depending on positions past the prefix is `Unknown`.
    fn eval(&mut self, f: &Formula, i: usize, reg: usize) -> Kleene {
        let key = (f as *const Formula, i, reg);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let w = self.word;
        let last = i + 1 == w.len();
        let v = match f {
            Formula::Atom(a) => Kleene::from(w.letter(i) == *a),
            Formula::Top => Kleene::True,
            Formula::Bot => Kleene::False,
            Formula::Up => Kleene::from(w.class(i) == reg),
            Formula::NotUp => Kleene::from(w.class(i) != reg),
            Formula::And(a, b) => {
                let x = self.eval(a, i, reg);
                if x == Kleene::False {
                    x
                } else {
                    x.and(self.eval(b, i, reg))
                }
            }
            Formula::Or(a, b) => {
                let x = self.eval(a, i, reg);
                if x == Kleene::True {
                    x
                } else {
                    x.or(self.eval(b, i, reg))
                }
            }
            Formula::Next(_) if last => Kleene::Unknown,
            Formula::Next(a) => self.eval(a, i + 1, reg),
            Formula::Release(a, b) => {
                let hold = self.eval(b, i, reg);
                if hold == Kleene::False {
                    hold
                } else {
                    let stop = self.eval(a, i, reg);
                    let later = if last {
                        Kleene::Unknown
                    } else {
                        self.eval(f, i + 1, reg)
                    };
                    hold.and(stop.or(later))
                }
            }
            Formula::Freeze(a) => self.eval(a, i, w.class(i)),
        };
        self.memo.insert(key, v);
        v
    }
}

/// Purely syntactic three-valued monitor: `X` at the last position is
/// undetermined and `R` is unrolled one step per position. Sound, but only
/// required to imply the automaton-based verdict.
pub fn syntactic_verdict(f: &Formula, w: &DataWord) -> Result<PrefixVerdict> {
    check_input(f, w)?;
    let mut m = Monitor {
        word: w,
        memo: HashMap::new(),
    };
    Ok(match m.eval(f, 0, w.class(0)) {
        Kleene::False => PrefixVerdict::Falsified,
        _ => PrefixVerdict::Undetermined,
    })
}
