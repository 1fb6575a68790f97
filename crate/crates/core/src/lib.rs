//! Decision procedures for safety LTL with one freeze register over data
//! ω-words.
//!
//! The pipeline runs: formulas ([`ltl`]) are translated into safety
//! one-way alternating automata with one register ([`ara`]), which are
//! compiled into powerset counter automata with distributive transfers and
//! incrementing errors ([`ipcant`]). The [`pipeline`] module holds the
//! compilation itself, bounded nonemptiness, inclusion checking by
//! well-quasi-order saturation, a Turing-machine formula generator and
//! brute-force oracles.

pub mod ara;
pub mod data;
pub mod error;
pub mod gen;
pub mod ipcant;
pub mod ltl;
pub mod pipeline;
pub mod stateset;
mod text;

pub use data::{Alphabet, DataWord, Letter};
pub use error::{Error, ParseError, Result};
pub use stateset::StateSet;
