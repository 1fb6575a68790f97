use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::compile::{CompiledMachine, Ctrl};
use crate::data::Letter;
use crate::ipcant::{CounterSystem, Semantics, Valuation};

/// Outcome of a bounded nonemptiness search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Nonempty,
    Empty,
    /// A bound cut the search short.
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nonempty => "NONEMPTY",
            Verdict::Empty => "EMPTY",
            Verdict::Unknown => "UNKNOWN",
        })
    }
}

/// Node expansions after which a search gives up with [`Verdict::Unknown`].
pub const NODE_BUDGET: usize = 2_000_000;

struct Frame<S> {
    state: S,
    val: Valuation,
    succ: Vec<(S, Valuation)>,
    next: usize,
    truncated: bool,
}

/// Searches for an infinite run from the initial configuration with all
/// counters zero.
pub fn bounded_nonemptiness<S: CounterSystem>(sys: &S, cap: usize, vcap: u32) -> Verdict {
    nonemptiness_from(sys, sys.initial_state(), Valuation::zero(), cap, vcap)
}

/// Searches for an infinite run from `(state, val)`.
///
/// A path on which some configuration is below an earlier one with the same
/// control state repeats forever, and so does a path of length `cap` once
/// `cap` reaches the run-length bound of the system. Configurations with a
/// counter above `vcap` are not expanded.
pub fn nonemptiness_from<S: CounterSystem>(
    sys: &S,
    state: S::State,
    val: Valuation,
    cap: usize,
    vcap: u32,
) -> Verdict {
    let sem = sys.exploration_semantics();
    let cap_decides = ((cap as f64) + 1.0).log2() >= sys.bound_log2();
    let succ = |s: &S::State, v: &Valuation| -> Vec<(S::State, Valuation)> {
        let mut out: Vec<_> = sys.successors(s, v, sem).into_iter().map(|(_, t, w)| (t, w)).collect();
        out.dedup();
        out
    };
    // Exactly explored configurations without an infinite run.
    let mut dead: HashSet<(S::State, Valuation)> = HashSet::new();
    // With lazy semantics, anything above a dead configuration is dead.
    let mut dead_below: HashMap<S::State, Vec<Valuation>> = HashMap::new();
    // Configurations cut short, with the smallest depth they were tried at.
    let mut cut: HashMap<(S::State, Valuation), usize> = HashMap::new();
    let mut on_path: HashMap<S::State, Vec<Valuation>> = HashMap::new();
    let mut any_cut = false;
    let mut expanded = 0usize;

    if val.max_value() > vcap {
        return Verdict::Unknown;
    }
    on_path.entry(state.clone()).or_default().push(val.clone());
    let first = succ(&state, &val);
    let mut stack = vec![Frame {
        state,
        val,
        succ: first,
        next: 0,
        truncated: false,
    }];

    while let Some(top) = stack.last_mut() {
        if top.next == top.succ.len() {
            let f = stack.pop().unwrap();
            on_path.get_mut(&f.state).unwrap().pop();
            if f.truncated {
                let depth = stack.len();
                cut.entry((f.state, f.val)).and_modify(|d| *d = (*d).min(depth)).or_insert(depth);
                if let Some(parent) = stack.last_mut() {
                    parent.truncated = true;
                }
            } else {
                if sem == Semantics::Lazy {
                    dead_below.entry(f.state.clone()).or_default().push(f.val.clone());
                }
                dead.insert((f.state, f.val));
            }
            continue;
        }
        let (s, v) = top.succ[top.next].clone();
        top.next += 1;
        let depth = stack.len();

        if on_path.get(&s).is_some_and(|us| us.iter().any(|u| v.le(u))) {
            return Verdict::Nonempty;
        }
        if dead.contains(&(s.clone(), v.clone())) {
            continue;
        }
        if sem == Semantics::Lazy && dead_below.get(&s).is_some_and(|us| us.iter().any(|u| u.le(&v))) {
            continue;
        }
        if let Some(&d) = cut.get(&(s.clone(), v.clone())) {
            if depth >= d {
                stack.last_mut().unwrap().truncated = true;
                any_cut = true;
                continue;
            }
        }
        if depth >= cap {
            if cap_decides {
                return Verdict::Nonempty;
            }
            stack.last_mut().unwrap().truncated = true;
            any_cut = true;
            continue;
        }
        if v.max_value() > vcap {
            stack.last_mut().unwrap().truncated = true;
            any_cut = true;
            continue;
        }
        expanded += 1;
        if expanded > NODE_BUDGET {
            return Verdict::Unknown;
        }
        let next = succ(&s, &v);
        on_path.entry(s.clone()).or_default().push(v.clone());
        stack.push(Frame {
            state: s,
            val: v,
            succ: next,
            next: 0,
            truncated: false,
        });
    }
    if any_cut {
        Verdict::Unknown
    } else {
        Verdict::Empty
    }
}

/// Adds `(s, v)` to a per-state antichain of minimal valuations. Returns
/// false when an element below it is already present.
pub(crate) fn insert_minimal<S: Clone + Eq + std::hash::Hash>(
    sets: &mut HashMap<S, Vec<Valuation>>,
    s: &S,
    v: &Valuation,
) -> bool {
    let list = sets.entry(s.clone()).or_default();
    if list.iter().any(|u| u.le(v)) {
        return false;
    }
    list.retain(|u| !v.le(u));
    list.push(v.clone());
    true
}

/// Configurations seen within one round. Under lazy semantics a smaller
/// valuation simulates a larger one, so only minimal ones are kept.
struct Seen {
    lazy: bool,
    exact: HashSet<(Ctrl, Valuation)>,
    minimal: HashMap<Ctrl, Vec<Valuation>>,
}

impl Seen {
    fn insert(&mut self, s: &Ctrl, v: &Valuation) -> bool {
        if self.lazy {
            insert_minimal(&mut self.minimal, s, v)
        } else {
            self.exact.insert((s.clone(), v.clone()))
        }
    }

    fn current(&self, s: &Ctrl, v: &Valuation) -> bool {
        !self.lazy || self.minimal.get(s).is_some_and(|vs| vs.contains(v))
    }
}

/// Whether the compiled machine can read `letters` completely, each letter
/// followed by the rest of its round up to the next loop head. Counters
/// above `vcap` are dropped.
pub fn accepts_prefix(m: &CompiledMachine, letters: &[Letter], sem: Semantics, vcap: u32) -> bool {
    let mut frontier: Vec<(Ctrl, Valuation)> = vec![(m.initial_state(), Valuation::zero())];
    for &a in letters {
        let mut heads: HashMap<Ctrl, Vec<Valuation>> = HashMap::new();
        let mut seen = Seen {
            lazy: sem == Semantics::Lazy,
            exact: HashSet::new(),
            minimal: HashMap::new(),
        };
        let mut work: Vec<(Ctrl, Valuation)> = Vec::new();
        for (s, v) in &frontier {
            for (label, t, w) in m.successors(s, v, sem) {
                if label == Some(a) && w.max_value() <= vcap && seen.insert(&t, &w) {
                    work.push((t, w));
                }
            }
        }
        while let Some((s, v)) = work.pop() {
            if !seen.current(&s, &v) {
                continue;
            }
            if CompiledMachine::is_loop(&s) {
                insert_minimal(&mut heads, &s, &v);
                continue;
            }
            for (label, t, w) in m.successors(&s, &v, sem) {
                if label.is_none() && w.max_value() <= vcap && seen.insert(&t, &w) {
                    work.push((t, w));
                }
            }
        }
        let mut next: BTreeSet<(Ctrl, Valuation)> = BTreeSet::new();
        for (s, vs) in heads {
            next.extend(vs.into_iter().map(|v| (s.clone(), v)));
        }
        frontier = next.into_iter().collect();
        if frontier.is_empty() {
            return false;
        }
    }
    true
}
