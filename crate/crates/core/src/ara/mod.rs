//! Safety one-way alternating automata with one register.

mod format;
mod posbool;
mod run;
mod translate;

pub use format::parse_automaton;
pub use posbool::{minimize, Model, PosBool, PosBoolDisplay};
pub use run::{rejection_point, run_exists, step, Config, ConfigSet, ModelTable};
pub use translate::ltl_to_ara;

use crate::data::{valid_name, Alphabet, Letter};
use crate::error::{Error, Result};

/// Whether the current position belongs to the class held in the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Up,
    NotUp,
}

impl Flag {
    pub const BOTH: [Flag; 2] = [Flag::Up, Flag::NotUp];

    pub fn of(matches: bool) -> Flag {
        if matches {
            Flag::Up
        } else {
            Flag::NotUp
        }
    }

    fn index(self) -> usize {
        match self {
            Flag::Up => 0,
            Flag::NotUp => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingAutomaton {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    delta: Vec<PosBool>,
}

impl AlternatingAutomaton {
    /// An automaton whose transitions are all `⊥`.
    pub fn new(alphabet: Alphabet, states: Vec<String>, initial: usize) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Invalid("an automaton needs at least one state".into()));
        }
        if initial >= states.len() {
            return Err(Error::OutOfRange {
                index: initial,
                len: states.len(),
            });
        }
        for (i, s) in states.iter().enumerate() {
            if !valid_name(s) {
                return Err(Error::Invalid(format!("bad state name `{s}`")));
            }
            if states[..i].contains(s) {
                return Err(Error::Invalid(format!("duplicate state `{s}`")));
            }
        }
        let delta = vec![PosBool::Bot; states.len() * alphabet.len() * 2];
        Ok(AlternatingAutomaton {
            alphabet,
            states,
            initial,
            delta,
        })
    }

    /// States named `q0`, `q1`, ...
    pub fn with_numbered_states(alphabet: Alphabet, n: usize, initial: usize) -> Result<Self> {
        Self::new(alphabet, (0..n).map(|i| format!("q{i}")).collect(), initial)
    }

    fn slot(&self, q: usize, a: Letter, flag: Flag) -> usize {
        (q * self.alphabet.len() + a) * 2 + flag.index()
    }

    pub fn set_delta(&mut self, q: usize, a: Letter, flag: Flag, phi: PosBool) -> Result<()> {
        let n = self.states.len();
        if q >= n {
            return Err(Error::OutOfRange { index: q, len: n });
        }
        if a >= self.alphabet.len() {
            return Err(Error::OutOfRange {
                index: a,
                len: self.alphabet.len(),
            });
        }
        if let Some(m) = phi.max_state() {
            if m >= n {
                return Err(Error::OutOfRange { index: m, len: n });
            }
        }
        let k = self.slot(q, a, flag);
        self.delta[k] = phi;
        Ok(())
    }

    /// Sets the formula for both flags.
    pub fn set_delta_both(&mut self, q: usize, a: Letter, phi: PosBool) -> Result<()> {
        self.set_delta(q, a, Flag::Up, phi.clone())?;
        self.set_delta(q, a, Flag::NotUp, phi)
    }

    pub fn delta(&self, q: usize, a: Letter, flag: Flag) -> &PosBool {
        &self.delta[self.slot(q, a, flag)]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Same shape, every formula dualized.
    pub fn dualize(&self) -> AlternatingAutomaton {
        AlternatingAutomaton {
            delta: self.delta.iter().map(PosBool::dual).collect(),
            ..self.clone()
        }
    }

    /// Accepts every word: the initial state has `⊤` everywhere.
    pub fn universal(alphabet: Alphabet) -> AlternatingAutomaton {
        let mut a = Self::with_numbered_states(alphabet, 1, 0).unwrap();
        a.delta.fill(PosBool::Top);
        a
    }

    /// Accepts nothing.
    pub fn empty(alphabet: Alphabet) -> AlternatingAutomaton {
        Self::with_numbered_states(alphabet, 1, 0).unwrap()
    }

    pub fn intersect(&self, other: &AlternatingAutomaton) -> Result<AlternatingAutomaton> {
        self.combine(other, PosBool::and)
    }

    pub fn union(&self, other: &AlternatingAutomaton) -> Result<AlternatingAutomaton> {
        self.combine(other, PosBool::or)
    }

    /// Disjoint union behind a fresh initial state at index 0; the states of
    /// `self` follow from index 1, then those of `other`.
    fn combine(
        &self,
        other: &AlternatingAutomaton,
        join: fn(PosBool, PosBool) -> PosBool,
    ) -> Result<AlternatingAutomaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let n1 = self.state_count();
        let mut names = vec!["init".to_string()];
        names.extend(self.states.iter().map(|s| format!("1.{s}")));
        names.extend(other.states.iter().map(|s| format!("2.{s}")));
        let mut out = AlternatingAutomaton::new(self.alphabet.clone(), names, 0)?;
        let left = |q: usize| q + 1;
        let right = |q: usize| q + 1 + n1;
        for a in self.alphabet.letters() {
            for flag in Flag::BOTH {
                for q in 0..n1 {
                    out.set_delta(left(q), a, flag, self.delta(q, a, flag).map_states(&left))?;
                }
                for q in 0..other.state_count() {
                    out.set_delta(right(q), a, flag, other.delta(q, a, flag).map_states(&right))?;
                }
                let init = join(
                    self.delta(self.initial, a, flag).map_states(&left),
                    other.delta(other.initial, a, flag).map_states(&right),
                );
                out.set_delta(0, a, flag, init)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::data::DataWord;

    pub(crate) const ACB: &str = "\
alphabet: a b c
states: q q' q''
initial: q
q, a, * -> q & d(q')
q, b, * -> q
q, c, * -> q
q', a, * -> q'
q', b, * -> q'
q', c, * -> q''
q'', a, * -> q''
q'', b, nup -> q''
q'', c, * -> q''
";

    pub(crate) fn acb() -> AlternatingAutomaton {
        parse_automaton(ACB).unwrap()
    }

    #[test]
    fn dualize_is_an_involution() {
        let a = acb();
        assert_eq!(a.dualize().dualize(), a);
        assert_eq!(*a.dualize().delta(2, 1, Flag::Up), PosBool::Top);
        assert_eq!(
            *a.dualize().delta(0, 0, Flag::Up),
            PosBool::Or(Box::new(PosBool::State(0)), Box::new(PosBool::Down(1)))
        );
    }

    #[test]
    fn products_count_states() {
        let a = acb();
        assert_eq!(a.intersect(&a).unwrap().state_count(), 7);
        assert_eq!(a.union(&a).unwrap().state_count(), 7);
        let other = AlternatingAutomaton::universal(Alphabet::new(["a", "b"]).unwrap());
        assert_eq!(a.intersect(&other), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn products_preserve_runs() {
        let a = acb();
        let top = AlternatingAutomaton::universal(a.alphabet().clone());
        let bot = AlternatingAutomaton::empty(a.alphabet().clone());
        let i = a.intersect(&top).unwrap();
        let u = bot.union(&a).unwrap();
        for len in 1..=4 {
            for w in crate::data::all_words(a.alphabet(), len, len) {
                let expected = run_exists(&a, &w).unwrap();
                assert_eq!(run_exists(&i, &w).unwrap(), expected, "{w:?}");
                assert_eq!(run_exists(&u, &w).unwrap(), expected, "{w:?}");
            }
        }
        let w = DataWord::parse("a@0", a.alphabet()).unwrap();
        assert!(run_exists(&top, &w).unwrap());
        assert!(!run_exists(&bot, &w).unwrap());
    }
}
