//! Compilation of automata to counter machines and the procedures built on it.

mod abstraction;
mod compile;
mod explore;
mod inclusion;
mod oracle;
mod tm;

pub use abstraction::{h_abstraction, triple_step, AbstractionTriple, ABSTRACTION_MAX_STATES};
pub use compile::{ara_to_ipcant, CompiledMachine, Ctrl, MAX_STATES};
pub use explore::{accepts_prefix, bounded_nonemptiness, nonemptiness_from, Verdict, NODE_BUDGET};
pub use inclusion::{inclusion_check, inclusion_machine, refine, InclusionVerdict, SaturationResult, ITERATION_CEILING};
pub use oracle::{oracle_run_exists, ORACLE_MAX_LENGTH, ORACLE_MAX_STATES};
pub use tm::{encode_tm_run, parse_tm, tm_families, tm_to_formula, Dir, Move, TuringMachine, TM_MAX_SIZE};
