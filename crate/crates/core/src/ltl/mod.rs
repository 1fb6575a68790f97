//! Safety LTL with one freeze register, restricted to `X` and `R`.
//!
//! Formulas are kept in negation normal form: there is no negation node,
//! `nup` is the primitive dual of `up`, and `G φ` is sugar for `false R φ`.

mod monitor;
mod parse;

use std::fmt;

pub use monitor::{evaluate_prefix, syntactic_verdict, PrefixVerdict};
pub use parse::{parse_formula, parse_ltl_file, LtlFile, RESERVED_WORDS};

use crate::data::{Alphabet, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Letter),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Freeze(Box<Formula>),
    Up,
    NotUp,
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn next(a: Formula) -> Formula {
        Formula::Next(Box::new(a))
    }

    /// `X` applied `n` times.
    pub fn next_n(n: usize, a: Formula) -> Formula {
        (0..n).fold(a, |f, _| Formula::next(f))
    }

    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    pub fn always(a: Formula) -> Formula {
        Formula::release(Formula::Bot, a)
    }

    pub fn freeze(a: Formula) -> Formula {
        Formula::Freeze(Box::new(a))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn all(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn any(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// Disjunction of the given letters.
    pub fn any_letter(letters: impl IntoIterator<Item = Letter>) -> Formula {
        Formula::any(letters.into_iter().map(Formula::Atom))
    }

    /// True iff every `up`/`nup` occurs below a freeze quantifier.
    pub fn is_sentence(&self) -> bool {
        fn go(f: &Formula, bound: bool) -> bool {
            match f {
                Formula::Up | Formula::NotUp => bound,
                Formula::Atom(_) | Formula::Top | Formula::Bot => true,
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Release(a, b) => {
                    go(a, bound) && go(b, bound)
                }
                Formula::Next(a) => go(a, bound),
                Formula::Freeze(a) => go(a, true),
            }
        }
        go(self, false)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Release(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Next(a) | Formula::Freeze(a) => 1 + a.size(),
            _ => 1,
        }
    }

    /// Largest letter index used, if any.
    pub fn max_letter(&self) -> Option<Letter> {
        match self {
            Formula::Atom(a) => Some(*a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Release(a, b) => {
                a.max_letter().max(b.max_letter())
            }
            Formula::Next(a) | Formula::Freeze(a) => a.max_letter(),
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            alphabet,
        }
    }
}

/// Binding strength used by the printer; larger binds tighter.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Release(a, _) if **a != Formula::Bot => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Next(_) | Formula::Freeze(_) | Formula::Release(..) => 4,
        _ => 5,
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    alphabet: &'a Alphabet,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = precedence(f) < min;
        if paren {
            out.write_str("(")?;
        }
        match f {
            Formula::Atom(a) => out.write_str(self.alphabet.name(*a))?,
            Formula::Top => out.write_str("true")?,
            Formula::Bot => out.write_str("false")?,
            Formula::Up => out.write_str("up")?,
            Formula::NotUp => out.write_str("nup")?,
            Formula::And(a, b) => {
                self.write(a, 3, out)?;
                out.write_str(" & ")?;
                self.write(b, 4, out)?;
            }
            Formula::Or(a, b) => {
                self.write(a, 2, out)?;
                out.write_str(" | ")?;
                self.write(b, 3, out)?;
            }
            Formula::Next(a) => {
                out.write_str("X ")?;
                self.write(a, 4, out)?;
            }
            Formula::Freeze(a) => {
                out.write_str("down ")?;
                self.write(a, 4, out)?;
            }
            Formula::Release(a, b) if **a == Formula::Bot => {
                out.write_str("G ")?;
                self.write(b, 4, out)?;
            }
            Formula::Release(a, b) => {
                self.write(a, 2, out)?;
                out.write_str(" R ")?;
                self.write(b, 1, out)?;
            }
        }
        if paren {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.formula, 0, f)
    }
}
