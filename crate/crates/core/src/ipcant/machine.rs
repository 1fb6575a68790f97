use std::fmt::Debug;
use std::hash::Hash;

use rand::SeedableRng;

use super::{
    bound_log2, check_distributive, check_distributive_sampled, compute_bound, fire, fire_lazy,
    BoundParams, Counter, Instruction, Transfer, Valuation,
};
use crate::data::{valid_name, Alphabet, Letter};
use crate::error::{Error, Result};

/// Which transitions exploration follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    ErrorFree,
    /// Error-free transitions plus decrements of zero counters as no-ops.
    Lazy,
}

/// A counter automaton whose control states are produced on demand.
pub trait CounterSystem {
    type State: Clone + Eq + Ord + Hash + Debug;

    fn alphabet(&self) -> &Alphabet;

    fn initial_state(&self) -> Self::State;

    fn state_name(&self, s: &Self::State) -> String;

    /// Labelled successors of configuration `(s, v)`, without duplicates.
    fn successors(
        &self,
        s: &Self::State,
        v: &Valuation,
        sem: Semantics,
    ) -> Vec<(Option<Letter>, Self::State, Valuation)>;

    /// `log2 m` for the run-length bound beyond which runs extend forever.
    fn bound_log2(&self) -> f64;

    /// Semantics under which searching this system is exact.
    fn exploration_semantics(&self) -> Semantics {
        Semantics::Lazy
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub from: usize,
    /// `None` for `ε`.
    pub label: Option<Letter>,
    pub instr: Instruction,
    pub to: usize,
}

/// Counter sets up to this size get the exhaustive distributivity check.
const EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct CounterMachine {
    alphabet: Alphabet,
    basis: Vec<String>,
    counters: Vec<Counter>,
    states: Vec<String>,
    initial: usize,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
}

fn check_names(kind: &str, names: &[String]) -> Result<()> {
    for (i, s) in names.iter().enumerate() {
        if !valid_name(s) {
            return Err(Error::Invalid(format!("bad {kind} name `{s}`")));
        }
        if names[..i].contains(s) {
            return Err(Error::Invalid(format!("duplicate {kind} `{s}`")));
        }
    }
    Ok(())
}

impl CounterMachine {
    /// Validates counters, instructions, transfer totality and
    /// distributivity, and absence of `ε` cycles.
    pub fn new(
        alphabet: Alphabet,
        basis: Vec<String>,
        counters: Vec<Counter>,
        states: Vec<String>,
        initial: usize,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        check_names("basis element", &basis)?;
        check_names("state", &states)?;
        if basis.len() > 64 {
            return Err(Error::TooLarge("more than 64 basis elements".into()));
        }
        let full = if basis.len() == 64 { u64::MAX } else { (1u64 << basis.len()) - 1 };
        let mut counters = counters;
        counters.sort_unstable();
        counters.dedup();
        if let Some(c) = counters.iter().find(|&&c| c == 0 || c & !full != 0) {
            return Err(Error::Invalid(format!("counter {c:#b} is not a non-empty subset of the basis")));
        }
        if initial >= states.len() {
            return Err(Error::OutOfRange {
                index: initial,
                len: states.len(),
            });
        }
        let mut outgoing = vec![Vec::new(); states.len()];
        for (k, t) in transitions.iter().enumerate() {
            if t.from >= states.len() || t.to >= states.len() {
                return Err(Error::OutOfRange {
                    index: t.from.max(t.to),
                    len: states.len(),
                });
            }
            if let Some(a) = t.label {
                if a >= alphabet.len() {
                    return Err(Error::OutOfRange {
                        index: a,
                        len: alphabet.len(),
                    });
                }
            }
            match &t.instr {
                Instruction::Inc(c) | Instruction::Dec(c) => {
                    if counters.binary_search(c).is_err() {
                        return Err(Error::Invalid(format!("{c:#b} is not a counter")));
                    }
                }
                Instruction::IfzCap(y) => {
                    if y & !full != 0 {
                        return Err(Error::Invalid(format!("{y:#b} is not a subset of the basis")));
                    }
                }
                Instruction::Transf(f) => {
                    let ok = if counters.len() <= EXHAUSTIVE_LIMIT {
                        check_distributive(f, &counters)?
                    } else {
                        let mut rng = rand::rngs::StdRng::seed_from_u64(k as u64);
                        check_distributive_sampled(f, &counters, 4096, &mut rng)?
                    };
                    if !ok {
                        return Err(Error::NotDistributive(format!("transition {}", k + 1)));
                    }
                    if let Transfer::Generated(_) = f {
                        for &c in &counters {
                            if let Some(d) = f.image(c).iter().find(|d| counters.binary_search(d).is_err()) {
                                return Err(Error::Invalid(format!("image {d:#b} is not a counter")));
                            }
                        }
                    }
                }
            }
            outgoing[t.from].push(k);
        }
        let m = CounterMachine {
            alphabet,
            basis,
            counters,
            states,
            initial,
            transitions,
            outgoing,
        };
        if let Some(q) = m.epsilon_cycle() {
            return Err(Error::Invalid(format!("ε-cycle through state `{}`", m.states[q])));
        }
        Ok(m)
    }

    fn epsilon_cycle(&self) -> Option<usize> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.states.len()];
        fn visit(m: &CounterMachine, q: usize, mark: &mut [u8]) -> Option<usize> {
            mark[q] = 1;
            for &k in &m.outgoing[q] {
                let t = &m.transitions[k];
                if t.label.is_some() {
                    continue;
                }
                match mark[t.to] {
                    1 => return Some(t.to),
                    0 => {
                        if let Some(r) = visit(m, t.to, mark) {
                            return Some(r);
                        }
                    }
                    _ => {}
                }
            }
            mark[q] = 2;
            None
        }
        (0..self.states.len()).find_map(|q| if mark[q] == 0 { visit(self, q, &mut mark) } else { None })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn counters(&self) -> &[Counter] {
        &self.counters
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Outgoing transitions of `q`.
    pub fn outgoing(&self, q: usize) -> impl Iterator<Item = &Transition> + '_ {
        self.outgoing[q].iter().map(|&k| &self.transitions[k])
    }

    /// `{x,y}` in basis order.
    pub fn counter_name(&self, c: Counter) -> String {
        mask_name(&self.basis, c)
    }

    pub fn bound(&self) -> BoundParams {
        compute_bound(self.states.len(), self.basis.len(), self.counters.len())
    }
}

pub(crate) fn mask_name(basis: &[String], c: u64) -> String {
    let parts: Vec<&str> = (0..basis.len())
        .filter(|i| c >> i & 1 == 1)
        .map(|i| basis[i].as_str())
        .collect();
    format!("{{{}}}", parts.join(","))
}

impl CounterSystem for CounterMachine {
    type State = usize;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn initial_state(&self) -> usize {
        self.initial
    }

    fn state_name(&self, s: &usize) -> String {
        self.states[*s].clone()
    }

    fn successors(&self, s: &usize, v: &Valuation, sem: Semantics) -> Vec<(Option<Letter>, usize, Valuation)> {
        let mut out = Vec::new();
        for t in self.outgoing(*s) {
            let next = match sem {
                Semantics::ErrorFree => fire(v, &t.instr),
                Semantics::Lazy => fire_lazy(v, &t.instr),
            };
            out.extend(next.into_iter().map(|w| (t.label, t.to, w)));
        }
        out.sort();
        out.dedup();
        out
    }

    fn bound_log2(&self) -> f64 {
        bound_log2(self.states.len() as f64, self.basis.len(), self.counters.len() as f64)
    }
}
