use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use crate::ara::{AlternatingAutomaton, Flag, Model, ModelTable};
use crate::data::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::ipcant::{
    bound_log2, fire, fire_lazy, Counter, CounterMachine, CounterSystem, Instruction, Semantics,
    Transfer, Transition, Valuation,
};
use crate::stateset::StateSet;

/// Largest automaton the compiler accepts; the basis has `3n + 2` elements.
pub const MAX_STATES: usize = 16;

/// Control states of the compiled machine. State sets are bit masks over
/// the automaton's states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ctrl {
    /// Start of the main loop, holding `Q↑`.
    Loop(u64),
    /// The letter has been read and the other classes advanced.
    Read { letter: Letter, up: u64 },
    /// Collecting the new `Q↑` class; states below `k` are decided.
    Collect { r: u64, k: usize },
    /// A pair counter was decremented to witness `k ∈ R↓`; it is restored next.
    Borrow { r: u64, k: usize, counter: Counter },
    /// About to move pair counters back to set counters.
    Flush,
    /// About to test whether the second component has no obligations left.
    Check,
    /// The second component has no obligations left.
    Empty2,
    /// About to pick the next `Q↑`.
    Choose,
}

/// Step-3 images per letter and per `R`, filled on demand.
struct Step3 {
    n: usize,
    images: Vec<Vec<OnceLock<Vec<Counter>>>>,
    /// Achievable `(∪ keep, ∪ down)` per state and letter under `nup`.
    pairs: Vec<Vec<Vec<(u64, u64)>>>,
}

impl Step3 {
    fn image(&self, a: Letter, r: u64) -> &[Counter] {
        self.images[a][r as usize].get_or_init(|| {
            let mut acc = BTreeSet::from([(0u64, 0u64)]);
            for q in 0..self.n {
                if r >> q & 1 == 0 {
                    continue;
                }
                let mut next = BTreeSet::new();
                for &(k, d) in &acc {
                    for &(mk, md) in &self.pairs[a][q] {
                        next.insert((k | mk, d | md));
                    }
                }
                acc = next;
            }
            acc.into_iter().map(|(k, d)| double(self.n, k, d)).collect()
        })
    }
}

fn single(r: u64) -> Counter {
    1 | r << 1
}

fn double(n: usize, r: u64, down: u64) -> Counter {
    1 << (n + 1) | r << (n + 2) | down << (2 * n + 2)
}

fn mask(n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        u64::MAX >> (64 - n)
    }
}

fn to_mask(s: &StateSet) -> u64 {
    s.low_mask()
}

fn model_pair(m: &Model) -> (u64, u64) {
    (to_mask(&m.keep), to_mask(&m.down))
}

/// The counter machine simulating an automaton on string projections.
pub struct CompiledMachine {
    automaton: AlternatingAutomaton,
    n: usize,
    step3_transfers: Vec<Transfer>,
    step6: Transfer,
    /// Achievable `R′` per letter and per `Q↑`, filled on demand.
    up_targets: Vec<Vec<OnceLock<Vec<u64>>>>,
    up_models: Vec<Vec<Vec<u64>>>,
    /// With `Some(Q2)`, step 6½ tests the set counters meeting `Q2`.
    second: Option<u64>,
}

/// Compiles `a` into a counter machine with the same string language.
pub fn ara_to_ipcant(a: &AlternatingAutomaton) -> Result<CompiledMachine> {
    CompiledMachine::build(a, None)
}

impl CompiledMachine {
    /// Like [`ara_to_ipcant`], with the extra test step passing through
    /// [`Ctrl::Empty2`] when no set counter meets `second`.
    pub fn with_emptiness_check(a: &AlternatingAutomaton, second: &StateSet) -> Result<Self> {
        Self::build(a, Some(to_mask(second)))
    }

    fn build(a: &AlternatingAutomaton, second: Option<u64>) -> Result<Self> {
        let n = a.state_count();
        if n > MAX_STATES {
            return Err(Error::TooLarge(format!(
                "{n} states; the compiler handles at most {MAX_STATES}"
            )));
        }
        let table = ModelTable::new(a);
        let sigma = a.alphabet().len();
        let per_state = |flag: Flag| -> Vec<Vec<Vec<(u64, u64)>>> {
            (0..sigma)
                .map(|l| (0..n).map(|q| table.get(q, l, flag).iter().map(model_pair).collect()).collect())
                .collect()
        };
        let pairs = per_state(Flag::NotUp);
        let up_models = per_state(Flag::Up)
            .into_iter()
            .map(|per_q| per_q.into_iter().map(|ms| ms.into_iter().map(|(k, d)| k | d).collect()).collect())
            .collect();
        let step3 = Arc::new(Step3 {
            n,
            images: (0..sigma)
                .map(|_| (0..1usize << n).map(|_| OnceLock::new()).collect())
                .collect(),
            pairs,
        });
        let full = mask(n);
        let step3_transfers = (0..sigma)
            .map(|l| {
                let t = Arc::clone(&step3);
                Transfer::generated(format!("step3_{}", a.alphabet().name(l)), move |c| {
                    if c & 1 == 1 {
                        t.image(l, c >> 1 & full).to_vec()
                    } else {
                        vec![c]
                    }
                })
            })
            .collect();
        let step6 = Transfer::generated("step6", move |c| {
            if c & 1 == 1 {
                vec![c]
            } else {
                vec![single(c >> (n + 2) & full)]
            }
        });
        Ok(CompiledMachine {
            automaton: a.clone(),
            n,
            step3_transfers,
            step6,
            up_targets: (0..sigma)
                .map(|_| (0..1usize << n).map(|_| OnceLock::new()).collect())
                .collect(),
            up_models,
            second,
        })
    }

    pub fn automaton(&self) -> &AlternatingAutomaton {
        &self.automaton
    }

    /// `3|Q| + 2`.
    pub fn basis_size(&self) -> usize {
        3 * self.n + 2
    }

    /// Basis names: `c*`, `c.q`, `d*`, `d.q`, `dv.q`.
    pub fn basis_names(&self) -> Vec<String> {
        let st = self.automaton.states();
        let mut out = vec!["c*".to_string()];
        out.extend(st.iter().map(|q| format!("c.{q}")));
        out.push("d*".to_string());
        out.extend(st.iter().map(|q| format!("d.{q}")));
        out.extend(st.iter().map(|q| format!("dv.{q}")));
        out
    }

    /// Every counter: `R̄` for `R ⊆ Q`, then the pair counters.
    pub fn counters(&self) -> Vec<Counter> {
        let n = self.n;
        let mut out: Vec<Counter> = (0..1u64 << n).map(single).collect();
        for r in 0..1u64 << n {
            for d in 0..1u64 << n {
                out.push(double(n, r, d));
            }
        }
        out.sort_unstable();
        out
    }

    pub fn counter_count(&self) -> usize {
        (1usize << self.n) + (1usize << (2 * self.n))
    }

    pub fn set_counter(&self, r: &StateSet) -> Counter {
        single(to_mask(r))
    }

    pub fn pair_counter(&self, r: &StateSet, down: &StateSet) -> Counter {
        double(self.n, to_mask(r), to_mask(down))
    }

    pub fn step3_transfer(&self, a: Letter) -> &Transfer {
        &self.step3_transfers[a]
    }

    pub fn step6_transfer(&self) -> &Transfer {
        &self.step6
    }

    pub fn is_loop(s: &Ctrl) -> bool {
        matches!(s, Ctrl::Loop(_))
    }

    fn up_targets(&self, a: Letter, up: u64) -> &[u64] {
        self.up_targets[a][up as usize].get_or_init(|| {
            let mut acc = BTreeSet::from([0u64]);
            for q in 0..self.n {
                if up >> q & 1 == 0 {
                    continue;
                }
                let mut next = BTreeSet::new();
                for &r in &acc {
                    for &m in &self.up_models[a][q] {
                        next.insert(r | m);
                    }
                }
                acc = next;
            }
            acc.into_iter().collect()
        })
    }

    fn sets_name(&self, r: u64) -> String {
        (0..self.n).map(|q| if r >> q & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// Control transitions out of `s`. With `support`, decrements are only
    /// offered on counters that are non-zero there.
    fn edges(&self, s: &Ctrl, support: Option<&Valuation>) -> Vec<(Option<Letter>, Instruction, Ctrl)> {
        let n = self.n;
        let mut out = Vec::new();
        match *s {
            Ctrl::Loop(up) => {
                for a in self.automaton.alphabet().letters() {
                    out.push((
                        Some(a),
                        Instruction::Transf(self.step3_transfers[a].clone()),
                        Ctrl::Read { letter: a, up },
                    ));
                }
            }
            Ctrl::Read { letter, up } => {
                for &r in self.up_targets(letter, up) {
                    out.push((None, Instruction::NOP, Ctrl::Collect { r, k: 0 }));
                }
            }
            Ctrl::Collect { r, k } if k == n => {
                out.push((None, Instruction::Inc(single(r)), Ctrl::Flush));
            }
            Ctrl::Collect { r, k } => {
                let dv = 1u64 << (2 * n + 2 + k);
                out.push((None, Instruction::IfzCap(dv), Ctrl::Collect { r, k: k + 1 }));
                let mut borrow = |counter: Counter| {
                    out.push((None, Instruction::Dec(counter), Ctrl::Borrow { r, k, counter }));
                };
                match support {
                    Some(v) => v.iter().map(|e| e.0).filter(|c| c & dv != 0).for_each(&mut borrow),
                    None => (0..1u64 << n)
                        .flat_map(|rr| (0..1u64 << n).map(move |d| (rr, d)))
                        .filter(|&(_, d)| d >> k & 1 == 1)
                        .for_each(|(rr, d)| borrow(double(n, rr, d))),
                }
            }
            Ctrl::Borrow { r, k, counter } => {
                out.push((None, Instruction::Inc(counter), Ctrl::Collect { r: r | 1 << k, k: k + 1 }));
            }
            Ctrl::Flush => {
                let next = if self.second.is_some() { Ctrl::Check } else { Ctrl::Choose };
                out.push((None, Instruction::Transf(self.step6.clone()), next));
            }
            Ctrl::Check => {
                let y = self.second.unwrap_or(0) << 1;
                out.push((None, Instruction::IfzCap(y), Ctrl::Empty2));
                out.push((None, Instruction::NOP, Ctrl::Choose));
            }
            Ctrl::Empty2 => out.push((None, Instruction::NOP, Ctrl::Choose)),
            Ctrl::Choose => {
                let mut pick = |u: u64| {
                    out.push((None, Instruction::Dec(single(u)), Ctrl::Loop(u)));
                };
                match support {
                    Some(v) => v
                        .iter()
                        .map(|e| e.0)
                        .filter(|c| c & 1 == 1)
                        .for_each(|c| pick(c >> 1 & mask(n))),
                    None => (0..1u64 << n).for_each(&mut pick),
                }
                out.push((None, Instruction::NOP, Ctrl::Loop(0)));
            }
        }
        out
    }

    /// Control states reachable in the transition graph, ignoring counters.
    pub fn control_states(&self) -> Vec<Ctrl> {
        let init = self.initial_state();
        let mut seen = BTreeSet::from([init.clone()]);
        let mut stack = vec![init];
        while let Some(s) = stack.pop() {
            for (_, _, t) in self.edges(&s, None) {
                if seen.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// The explicit machine over the reachable control graph; exponential in
    /// the number of automaton states.
    pub fn materialize(&self) -> Result<CounterMachine> {
        if self.n > 3 {
            return Err(Error::TooLarge(format!(
                "materializing needs at most 3 automaton states, got {}",
                self.n
            )));
        }
        let states = self.control_states();
        let index: BTreeMap<&Ctrl, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let counters = self.counters();
        let mut transitions = Vec::new();
        for s in &states {
            for (label, instr, t) in self.edges(s, None) {
                let instr = match instr {
                    Instruction::Transf(f) => Instruction::Transf(Transfer::explicit(f.tabulate(&counters))),
                    other => other,
                };
                transitions.push(Transition {
                    from: index[s],
                    label,
                    instr,
                    to: index[&t],
                });
            }
        }
        let names = states.iter().map(|s| self.state_name(s)).collect();
        let init = index[&self.initial_state()];
        CounterMachine::new(
            self.automaton.alphabet().clone(),
            self.basis_names(),
            counters,
            names,
            init,
            transitions,
        )
    }

    /// Number of control states, counting every potential one.
    fn control_state_count(&self) -> f64 {
        let n = self.n as f64;
        let sets = 2f64.powf(n);
        let sigma = self.automaton.alphabet().len() as f64;
        sets * (1.0 + sigma + (n + 1.0) + n * sets * sets / 2.0) + 5.0
    }
}

impl CounterSystem for CompiledMachine {
    type State = Ctrl;

    fn alphabet(&self) -> &Alphabet {
        self.automaton.alphabet()
    }

    fn initial_state(&self) -> Ctrl {
        Ctrl::Loop(1 << self.automaton.initial())
    }

    fn state_name(&self, s: &Ctrl) -> String {
        match s {
            Ctrl::Loop(u) => format!("loop_{}", self.sets_name(*u)),
            Ctrl::Read { letter, up } => format!(
                "read_{}_{}",
                self.automaton.alphabet().name(*letter),
                self.sets_name(*up)
            ),
            Ctrl::Collect { r, k } => format!("collect_{}_{k}", self.sets_name(*r)),
            Ctrl::Borrow { r, k, counter } => {
                let rr = counter >> (self.n + 2) & mask(self.n);
                let d = counter >> (2 * self.n + 2) & mask(self.n);
                format!(
                    "borrow_{}_{k}_{}_{}",
                    self.sets_name(*r),
                    self.sets_name(rr),
                    self.sets_name(d)
                )
            }
            Ctrl::Flush => "flush".into(),
            Ctrl::Check => "check".into(),
            Ctrl::Empty2 => "empty2".into(),
            Ctrl::Choose => "choose".into(),
        }
    }

    fn successors(&self, s: &Ctrl, v: &Valuation, sem: Semantics) -> Vec<(Option<Letter>, Ctrl, Valuation)> {
        let support = match sem {
            Semantics::ErrorFree => Some(v),
            Semantics::Lazy => None,
        };
        let mut out = Vec::new();
        for (label, instr, t) in self.edges(s, support) {
            let next = match sem {
                Semantics::ErrorFree => fire(v, &instr),
                Semantics::Lazy => fire_lazy(v, &instr),
            };
            out.extend(next.into_iter().map(|w| (label, t.clone(), w)));
        }
        out.sort();
        out.dedup();
        out
    }

    fn bound_log2(&self) -> f64 {
        bound_log2(self.control_state_count(), self.basis_size(), self.counter_count() as f64)
    }

    fn exploration_semantics(&self) -> Semantics {
        Semantics::ErrorFree
    }
}
