use std::collections::{BTreeMap, BTreeSet};

use crate::ara::{AlternatingAutomaton, ConfigSet, Flag, Model};
use crate::data::{DataWord, Letter};
use crate::error::{Error, Result};
use crate::stateset::StateSet;

/// Largest automaton [`triple_step`] enumerates models for.
pub const ABSTRACTION_MAX_STATES: usize = 6;

/// The counting abstraction of a configuration set at one position: the
/// letter, the states paired with the position's class, and how many other
/// classes carry each non-empty state set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbstractionTriple {
    pub letter: Letter,
    pub up: StateSet,
    /// Never keyed by the empty set; zero counts are absent.
    pub count: BTreeMap<StateSet, usize>,
}

impl AbstractionTriple {
    pub fn new(letter: Letter, up: StateSet, count: BTreeMap<StateSet, usize>) -> Self {
        let count = count.into_iter().filter(|(r, k)| !r.is_empty() && *k > 0).collect();
        AbstractionTriple { letter, up, count }
    }
}

/// Abstracts `f` at position `i` of `w`.
pub fn h_abstraction(w: &DataWord, i: usize, f: &ConfigSet) -> Result<AbstractionTriple> {
    if i >= w.len() {
        return Err(Error::OutOfRange { index: i, len: w.len() });
    }
    let here = w.class(i);
    let mut up = StateSet::new();
    let mut per_class: BTreeMap<usize, StateSet> = BTreeMap::new();
    for c in f {
        if c.class == here {
            up.insert(c.state);
        } else {
            per_class.entry(c.class).or_default().insert(c.state);
        }
    }
    let mut count = BTreeMap::new();
    for r in per_class.into_values() {
        *count.entry(r).or_insert(0) += 1;
    }
    Ok(AbstractionTriple::new(w.letter(i), up, count))
}

/// Unions `(∪ keep, ∪ down)` achievable by picking one model per state of
/// `r` from `models`.
fn union_pairs(r: u64, models: &[Vec<(u64, u64)>]) -> BTreeSet<(u64, u64)> {
    let mut acc = BTreeSet::from([(0u64, 0u64)]);
    for (q, ms) in models.iter().enumerate() {
        if r >> q & 1 == 0 {
            continue;
        }
        acc = acc
            .iter()
            .flat_map(|&(k, d)| ms.iter().map(move |&(mk, md)| (k | mk, d | md)))
            .collect();
    }
    acc
}

/// Whether `t → t′` in the abstract transition system of `a`. Every
/// satisfying model counts, not only minimal ones.
pub fn triple_step(a: &AlternatingAutomaton, t: &AbstractionTriple, t2: &AbstractionTriple) -> Result<bool> {
    let n = a.state_count();
    if n > ABSTRACTION_MAX_STATES {
        return Err(Error::TooLarge(format!(
            "{n} states; abstract steps enumerate models for at most {ABSTRACTION_MAX_STATES}"
        )));
    }
    let sigma = a.alphabet().len();
    if t.letter >= sigma || t2.letter >= sigma {
        return Err(Error::OutOfRange {
            index: t.letter.max(t2.letter),
            len: sigma,
        });
    }
    let mask = |s: &StateSet| -> Result<u64> {
        match s.iter().find(|&q| q >= n) {
            Some(q) => Err(Error::OutOfRange { index: q, len: n }),
            None => Ok(s.low_mask()),
        }
    };
    let models = |flag: Flag| -> Vec<Vec<(u64, u64)>> {
        (0..n)
            .map(|q| {
                let phi = a.delta(q, t.letter, flag);
                Model::all_pairs(n)
                    .filter(|m| phi.eval(m))
                    .map(|m| (m.keep.low_mask(), m.down.low_mask()))
                    .collect()
            })
            .collect()
    };
    let up_models = models(Flag::Up);
    let nup_models = models(Flag::NotUp);

    let up_unions: BTreeSet<u64> = union_pairs(mask(&t.up)?, &up_models)
        .into_iter()
        .map(|(k, d)| k | d)
        .collect();
    if up_unions.is_empty() {
        return Ok(false);
    }

    let target_up = mask(&t2.up)?;
    let mut target: BTreeMap<u64, usize> = BTreeMap::new();
    for (r, &k) in &t2.count {
        target.insert(mask(r)?, k);
    }
    // With a non-empty Q′↑, the next class is one of the counted ones.
    if target_up != 0 {
        *target.entry(target_up).or_insert(0) += 1;
    }

    // Multisets of keep sets from the other classes, with their down union.
    type Partial = (BTreeMap<u64, usize>, u64);
    let mut states: BTreeSet<Partial> = BTreeSet::from([(BTreeMap::new(), 0)]);
    for (r, &k) in &t.count {
        let pairs = union_pairs(mask(r)?, &nup_models);
        for _ in 0..k {
            let mut next = BTreeSet::new();
            for (counts, down) in &states {
                for &(keep, d) in &pairs {
                    let mut c = counts.clone();
                    if keep != 0 {
                        let e = c.entry(keep).or_insert(0);
                        *e += 1;
                        if *e > target.get(&keep).copied().unwrap_or(0) {
                            continue;
                        }
                    }
                    next.insert((c, down | d));
                }
            }
            states = next;
            if states.is_empty() {
                return Ok(false);
            }
        }
    }

    for (counts, down) in &states {
        for &u in &up_unions {
            let mut dagger = counts.clone();
            let current = u | down;
            if current != 0 {
                *dagger.entry(current).or_insert(0) += 1;
            }
            if dagger == target {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
