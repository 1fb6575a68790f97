use std::collections::HashMap;
use std::fmt;

use super::compile::{CompiledMachine, Ctrl};
use super::explore::{insert_minimal, nonemptiness_from, Verdict};
use crate::ara::{ltl_to_ara, AlternatingAutomaton};
use crate::data::Alphabet;
use crate::error::{Error, Result};
use crate::ipcant::{CounterSystem, Valuation};
use crate::ltl::Formula;
use crate::stateset::StateSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InclusionVerdict {
    Included,
    NotIncluded,
    /// A bound cut the search short.
    Unknown,
}

impl fmt::Display for InclusionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InclusionVerdict::Included => "INCLUDED",
            InclusionVerdict::NotIncluded => "NOT_INCLUDED",
            InclusionVerdict::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SaturationResult {
    /// Minimal reachable configurations when the loop stopped.
    pub last: Vec<(Ctrl, Valuation)>,
    pub verdict: InclusionVerdict,
    /// Configurations taken off the worklist.
    pub iterations: usize,
}

/// Worklist rounds after which saturation gives up.
pub const ITERATION_CEILING: usize = 1_000_000;

/// Builds `A1 ∧ dual(A2)` and its compiled machine with the emptiness test
/// on the second component.
pub fn inclusion_machine(a1: &AlternatingAutomaton, a2: &AlternatingAutomaton) -> Result<CompiledMachine> {
    let product = a1.intersect(&a2.dualize())?;
    let n1 = a1.state_count();
    let second: StateSet = (n1 + 1..n1 + 1 + a2.state_count()).collect();
    CompiledMachine::with_emptiness_check(&product, &second)
}

/// Decides `L(a1) ⊆ L(a2)` by saturating the reachable configurations of
/// the product machine, then searching for an infinite run from each
/// configuration in which the second component has no obligations left.
pub fn inclusion_check(
    a1: &AlternatingAutomaton,
    a2: &AlternatingAutomaton,
    cap: usize,
    vcap: u32,
) -> Result<SaturationResult> {
    if a1.alphabet() != a2.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let m = inclusion_machine(a1, a2)?;
    Ok(saturate(&m, cap, vcap))
}

fn saturate(m: &CompiledMachine, cap: usize, vcap: u32) -> SaturationResult {
    let sem = m.exploration_semantics();
    let mut minimal: HashMap<Ctrl, Vec<Valuation>> = HashMap::new();
    let init = (m.initial_state(), Valuation::zero());
    insert_minimal(&mut minimal, &init.0, &init.1);
    let mut work = vec![init];
    let mut iterations = 0;
    let mut bounded = false;
    while let Some((s, v)) = work.pop() {
        if !minimal.get(&s).is_some_and(|vs| vs.contains(&v)) {
            continue;
        }
        iterations += 1;
        if iterations > ITERATION_CEILING {
            return finish(minimal, InclusionVerdict::Unknown, iterations);
        }
        for (_, t, w) in m.successors(&s, &v, sem) {
            if w.max_value() > vcap {
                bounded = true;
                continue;
            }
            if insert_minimal(&mut minimal, &t, &w) {
                work.push((t, w));
            }
        }
    }
    let mut verdict = if bounded {
        InclusionVerdict::Unknown
    } else {
        InclusionVerdict::Included
    };
    if let Some(vs) = minimal.get(&Ctrl::Empty2) {
        let mut vs = vs.clone();
        vs.sort();
        for v in vs {
            match nonemptiness_from(m, Ctrl::Empty2, v, cap, vcap) {
                Verdict::Nonempty => {
                    verdict = InclusionVerdict::NotIncluded;
                    break;
                }
                Verdict::Unknown => verdict = InclusionVerdict::Unknown,
                Verdict::Empty => {}
            }
        }
    }
    finish(minimal, verdict, iterations)
}

fn finish(minimal: HashMap<Ctrl, Vec<Valuation>>, verdict: InclusionVerdict, iterations: usize) -> SaturationResult {
    let mut last: Vec<(Ctrl, Valuation)> = minimal
        .into_iter()
        .flat_map(|(s, vs)| vs.into_iter().map(move |v| (s.clone(), v)))
        .collect();
    last.sort();
    SaturationResult {
        last,
        verdict,
        iterations,
    }
}

/// Decides whether `f1 → f2` is valid, as inclusion of their languages.
pub fn refine(f1: &Formula, f2: &Formula, alphabet: &Alphabet, cap: usize, vcap: u32) -> Result<SaturationResult> {
    let a1 = ltl_to_ara(f1, alphabet)?;
    let a2 = ltl_to_ara(f2, alphabet)?;
    inclusion_check(&a1, &a2, cap, vcap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ara::tests::acb;

    #[test]
    fn basic_inclusions() {
        let f = acb();
        let top = AlternatingAutomaton::universal(f.alphabet().clone());
        let bot = AlternatingAutomaton::empty(f.alphabet().clone());
        assert_eq!(inclusion_check(&f, &f, 10_000, 64).unwrap().verdict, InclusionVerdict::Included);
        assert_eq!(inclusion_check(&f, &top, 10_000, 64).unwrap().verdict, InclusionVerdict::Included);
        assert_eq!(inclusion_check(&bot, &f, 10_000, 64).unwrap().verdict, InclusionVerdict::Included);
        assert_eq!(inclusion_check(&top, &f, 10_000, 64).unwrap().verdict, InclusionVerdict::NotIncluded);
        assert_eq!(inclusion_check(&f, &bot, 10_000, 64).unwrap().verdict, InclusionVerdict::NotIncluded);
    }

    #[test]
    fn alphabet_mismatch() {
        let f = acb();
        let other = AlternatingAutomaton::universal(Alphabet::new(["a"]).unwrap());
        assert!(matches!(inclusion_check(&f, &other, 10, 4), Err(Error::AlphabetMismatch)));
    }
}
