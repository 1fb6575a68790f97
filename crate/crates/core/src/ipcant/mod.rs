//! Powerset counter automata with nondeterministic distributive transfers
//! and incrementing errors.
//!
//! A counter is a non-empty subset of the basis, stored as a bit mask over
//! basis indices (so bases have at most 64 elements).

mod bound;
mod distributive;
mod format;
mod machine;

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub use bound::{bound_log2, compute_bound, BoundParams};
pub use distributive::{check_distributive, check_distributive_sampled, distributivity_violation};
pub use format::parse_machine;
pub use machine::{CounterMachine, CounterSystem, Semantics, Transition};

/// A non-empty subset of the basis, as a bit mask.
pub type Counter = u64;

/// Sparse counter valuation; absent counters are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    entries: Vec<(Counter, u32)>,
}

impl Valuation {
    pub fn zero() -> Self {
        Valuation::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Counter, u32)>) -> Self {
        let mut v = Valuation::zero();
        for (c, n) in pairs {
            v.add(c, n);
        }
        v
    }

    pub fn get(&self, c: Counter) -> u32 {
        match self.entries.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn add(&mut self, c: Counter, n: u32) {
        if n == 0 {
            return;
        }
        match self.entries.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.entries[i].1 += n,
            Err(i) => self.entries.insert(i, (c, n)),
        }
    }

    pub fn inc(&mut self, c: Counter) {
        self.add(c, 1);
    }

    /// Decrements `c`; false (and unchanged) when it is zero.
    pub fn dec(&mut self, c: Counter) -> bool {
        match self.entries.binary_search_by_key(&c, |e| e.0) {
            Ok(i) => {
                self.entries[i].1 -= 1;
                if self.entries[i].1 == 0 {
                    self.entries.remove(i);
                }
                true
            }
            Err(_) => false,
        }
    }

    /// Non-zero entries in counter order.
    pub fn iter(&self) -> impl Iterator<Item = (Counter, u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| u64::from(e.1)).sum()
    }

    pub fn max_value(&self) -> u32 {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// Pointwise `≤`.
    pub fn le(&self, other: &Valuation) -> bool {
        self.entries.iter().all(|&(c, n)| other.get(c) >= n)
    }
}

/// Explicit or computed map `f : C → P(C)`.
#[derive(Clone)]
pub enum Transfer {
    Explicit(Arc<BTreeMap<Counter, Vec<Counter>>>),
    Generated(Arc<GeneratedTransfer>),
}

/// A transfer map given by a function, for machines too large to tabulate.
pub struct GeneratedTransfer {
    pub name: String,
    pub image: Box<dyn Fn(Counter) -> Vec<Counter> + Send + Sync>,
}

impl Transfer {
    pub fn explicit(map: BTreeMap<Counter, Vec<Counter>>) -> Self {
        Transfer::Explicit(Arc::new(map))
    }

    pub fn generated(
        name: impl Into<String>,
        image: impl Fn(Counter) -> Vec<Counter> + Send + Sync + 'static,
    ) -> Self {
        Transfer::Generated(Arc::new(GeneratedTransfer {
            name: name.into(),
            image: Box::new(image),
        }))
    }

    /// `f(c)`; counters missing from an explicit map have no image.
    pub fn image(&self, c: Counter) -> Cow<'_, [Counter]> {
        match self {
            Transfer::Explicit(m) => Cow::Borrowed(m.get(&c).map_or(&[][..], Vec::as_slice)),
            Transfer::Generated(g) => Cow::Owned((g.image)(c)),
        }
    }

    /// The explicit map restricted to `counters`.
    pub fn tabulate(&self, counters: &[Counter]) -> BTreeMap<Counter, Vec<Counter>> {
        counters.iter().map(|&c| (c, self.image(c).into_owned())).collect()
    }
}

impl fmt::Debug for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transfer::Explicit(m) => f.debug_tuple("Explicit").field(m).finish(),
            Transfer::Generated(g) => f.debug_tuple("Generated").field(&g.name).finish(),
        }
    }
}

impl PartialEq for Transfer {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Transfer::Explicit(a), Transfer::Explicit(b)) => a == b,
            (Transfer::Generated(a), Transfer::Generated(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Inc(Counter),
    Dec(Counter),
    Transf(Transfer),
    /// `ifz^∩ Y`: firable iff every counter meeting `Y` is zero; `Y` is a
    /// basis mask, and `Y = ∅` is a no-op.
    IfzCap(u64),
}

impl Instruction {
    pub const NOP: Instruction = Instruction::IfzCap(0);

    /// `f_Y` as an explicit map over `counters`.
    pub fn ifz_map(y: u64, counters: &[Counter]) -> BTreeMap<Counter, Vec<Counter>> {
        counters
            .iter()
            .map(|&c| (c, if c & y != 0 { Vec::new() } else { vec![c] }))
            .collect()
    }
}

/// Every way of splitting `n` tokens over `k` slots.
fn compositions(n: u32, k: usize, out: &mut Vec<Vec<u32>>) {
    fn go(n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            cur.push(n);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=n).rev() {
            cur.push(x);
            go(n - x, k - 1, cur, out);
            cur.pop();
        }
    }
    if k > 0 {
        go(n, k, &mut Vec::new(), out);
    }
}

/// All valuations obtainable from `v` by the transfer with image `f`.
pub fn transfer_results(v: &Valuation, f: &dyn Fn(Counter) -> Vec<Counter>) -> BTreeSet<Valuation> {
    let mut partial = BTreeSet::from([Valuation::zero()]);
    for (c, n) in v.iter() {
        let img = f(c);
        if img.is_empty() {
            return BTreeSet::new();
        }
        let mut splits = Vec::new();
        compositions(n, img.len(), &mut splits);
        let mut next = BTreeSet::new();
        for p in &partial {
            for s in &splits {
                let mut q = p.clone();
                for (&d, &k) in img.iter().zip(s) {
                    q.add(d, k);
                }
                next.insert(q);
            }
        }
        partial = next;
    }
    partial
}

/// Error-free firing.
pub fn fire(v: &Valuation, instr: &Instruction) -> BTreeSet<Valuation> {
    match instr {
        Instruction::Inc(c) => {
            let mut w = v.clone();
            w.inc(*c);
            BTreeSet::from([w])
        }
        Instruction::Dec(c) => {
            let mut w = v.clone();
            if w.dec(*c) {
                BTreeSet::from([w])
            } else {
                BTreeSet::new()
            }
        }
        Instruction::IfzCap(y) => {
            if v.iter().any(|(c, _)| c & y != 0) {
                BTreeSet::new()
            } else {
                BTreeSet::from([v.clone()])
            }
        }
        Instruction::Transf(t) => transfer_results(v, &|c| t.image(c).into_owned()),
    }
}

/// Lazy firing: a decrement of a zero counter leaves `v` unchanged.
pub fn fire_lazy(v: &Valuation, instr: &Instruction) -> BTreeSet<Valuation> {
    match instr {
        Instruction::Dec(c) if v.get(*c) == 0 => BTreeSet::from([v.clone()]),
        _ => fire(v, instr),
    }
}

/// `v_√ ⊑ v`: the tokens of `v_√` can be matched injectively to tokens of
/// `v` sitting on supersets.
pub fn sqsse(v_sqrt: &Valuation, v: &Valuation) -> bool {
    let left: Vec<(Counter, u32)> = v_sqrt.iter().collect();
    let right: Vec<(Counter, u32)> = v.iter().collect();
    let need: u64 = v_sqrt.total();
    if need > v.total() {
        return false;
    }
    // Max flow source → left (cap v_√) → right (edge iff c ⊆ d) → sink (cap v).
    let mut flow = vec![vec![0u32; right.len()]; left.len()];
    let mut out_left = vec![0u32; left.len()];
    let mut in_right = vec![0u32; right.len()];
    let mut total = 0u64;
    loop {
        // BFS over left and right nodes in the residual graph.
        let mut prev_left: Vec<Option<usize>> = vec![None; left.len()];
        let mut seen_left = vec![false; left.len()];
        let mut prev_right: Vec<Option<usize>> = vec![None; right.len()];
        let mut queue: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
        for (i, &(_, n)) in left.iter().enumerate() {
            if out_left[i] < n {
                seen_left[i] = true;
                queue.push_back(i);
            }
        }
        let mut end = None;
        'bfs: while let Some(i) = queue.pop_front() {
            for (j, &(d, cap)) in right.iter().enumerate() {
                if prev_right[j].is_some() || left[i].0 & !d != 0 {
                    continue;
                }
                prev_right[j] = Some(i);
                if in_right[j] < cap {
                    end = Some(j);
                    break 'bfs;
                }
                for (k, row) in flow.iter().enumerate() {
                    if row[j] > 0 && !seen_left[k] {
                        seen_left[k] = true;
                        prev_left[k] = Some(j);
                        queue.push_back(k);
                    }
                }
            }
        }
        let Some(mut j) = end else {
            break;
        };
        in_right[j] += 1;
        loop {
            let i = prev_right[j].unwrap();
            flow[i][j] += 1;
            match prev_left[i] {
                Some(j2) => {
                    flow[i][j2] -= 1;
                    j = j2;
                }
                None => {
                    out_left[i] += 1;
                    break;
                }
            }
        }
        total += 1;
        if total == need {
            break;
        }
    }
    total == need
}
