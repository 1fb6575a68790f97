use std::cell::OnceCell;
use std::collections::BTreeSet;

use super::{AlternatingAutomaton, Flag, Model};
use crate::data::DataWord;
use crate::error::{Error, Result};

/// A state paired with the class held in its register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    pub state: usize,
    pub class: usize,
}

impl Config {
    pub fn new(state: usize, class: usize) -> Self {
        Config { state, class }
    }
}

pub type ConfigSet = BTreeSet<Config>;

/// Minimal models of every transition formula, computed on first use.
pub struct ModelTable<'a> {
    automaton: &'a AlternatingAutomaton,
    cells: Vec<OnceCell<Vec<Model>>>,
}

impl<'a> ModelTable<'a> {
    pub fn new(automaton: &'a AlternatingAutomaton) -> Self {
        let n = automaton.state_count() * automaton.alphabet().len() * 2;
        ModelTable {
            automaton,
            cells: (0..n).map(|_| OnceCell::new()).collect(),
        }
    }

    pub fn automaton(&self) -> &'a AlternatingAutomaton {
        self.automaton
    }

    pub fn get(&self, q: usize, a: usize, flag: Flag) -> &[Model] {
        let k = self.automaton.slot(q, a, flag);
        self.cells[k].get_or_init(|| self.automaton.delta(q, a, flag).minimal_models())
    }

    /// Successor configurations contributed by `c` choosing model `m` at a
    /// position of class `class`.
    fn image(c: Config, m: &Model, class: usize, out: &mut ConfigSet) {
        for q in m.keep.iter() {
            out.insert(Config::new(q, c.class));
        }
        for q in m.down.iter() {
            out.insert(Config::new(q, class));
        }
    }

    /// Successor sets of `from` at position `i`. With `prune`, only the
    /// ⊆-minimal ones are kept, which suffices for run existence.
    fn successors(&self, w: &DataWord, i: usize, from: &ConfigSet, prune: bool) -> Vec<ConfigSet> {
        let a = w.letter(i);
        let class = w.class(i);
        let mut partial: Vec<ConfigSet> = vec![ConfigSet::new()];
        for &c in from {
            let models = self.get(c.state, a, Flag::of(c.class == class));
            if models.is_empty() {
                return Vec::new();
            }
            let mut next = BTreeSet::new();
            for p in &partial {
                for m in models {
                    let mut s = p.clone();
                    Self::image(c, m, class, &mut s);
                    next.insert(s);
                }
            }
            partial = next.into_iter().collect();
            if prune {
                partial = minimal_sets(partial);
            }
        }
        partial
    }
}

/// Keeps the ⊆-minimal sets, in canonical order.
pub(crate) fn minimal_sets(mut sets: Vec<ConfigSet>) -> Vec<ConfigSet> {
    sets.sort_by_key(|s| s.len());
    let mut kept: Vec<ConfigSet> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept
}

fn check_position(w: &DataWord, i: usize) -> Result<()> {
    if i >= w.len() {
        return Err(Error::OutOfRange {
            index: i,
            len: w.len(),
        });
    }
    Ok(())
}

/// All `F′` with `F →^{w,i} F′` built from minimal models; empty when some
/// configuration cannot move.
pub fn step(
    a: &AlternatingAutomaton,
    w: &DataWord,
    i: usize,
    from: &ConfigSet,
) -> Result<BTreeSet<ConfigSet>> {
    check_position(w, i)?;
    let classes = w.classes()[..=i].iter().max().copied().unwrap_or(0);
    for c in from {
        if c.state >= a.state_count() || c.class > classes {
            return Err(Error::Invalid(format!(
                "configuration ({}, {}) is not valid at position {i}",
                c.state, c.class
            )));
        }
    }
    let table = ModelTable::new(a);
    Ok(table.successors(w, i, from, false).into_iter().collect())
}

/// Length of the longest prefix of `w` admitting a partial run.
fn longest_run(table: &ModelTable<'_>, w: &DataWord) -> usize {
    let a = table.automaton();
    let mut frontier = vec![ConfigSet::from([Config::new(a.initial(), w.class(0))])];
    for i in 0..w.len() {
        let mut next = Vec::new();
        for f in &frontier {
            next.extend(table.successors(w, i, f, true));
        }
        if next.is_empty() {
            return i;
        }
        frontier = minimal_sets(next);
    }
    w.len()
}

/// True iff some partial run reads the whole of `w`.
pub fn run_exists(a: &AlternatingAutomaton, w: &DataWord) -> Result<bool> {
    Ok(rejection_point(a, w)?.is_none())
}

/// The length of the shortest rejected prefix, if `w` is rejected.
pub fn rejection_point(a: &AlternatingAutomaton, w: &DataWord) -> Result<Option<usize>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if a.alphabet().len() <= w.letters().iter().copied().max().unwrap_or(0) {
        return Err(Error::AlphabetMismatch);
    }
    let table = ModelTable::new(a);
    let n = longest_run(&table, w);
    Ok((n < w.len()).then_some(n + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ara::tests::acb;

    fn cs(xs: &[(usize, usize)]) -> ConfigSet {
        xs.iter().map(|&(q, c)| Config::new(q, c)).collect()
    }

    #[test]
    fn step_examples() {
        let a = acb();
        let w = DataWord::parse("a@0", a.alphabet()).unwrap();
        let out = step(&a, &w, 0, &cs(&[(0, 0)])).unwrap();
        assert_eq!(out, BTreeSet::from([cs(&[(0, 0), (1, 0)])]));
        let w = DataWord::parse("a@0 b@0", a.alphabet()).unwrap();
        assert!(step(&a, &w, 1, &cs(&[(2, 0)])).unwrap().is_empty());
        assert_eq!(
            step(&a, &w, 1, &ConfigSet::new()).unwrap(),
            BTreeSet::from([ConfigSet::new()])
        );
        assert!(step(&a, &w, 2, &ConfigSet::new()).is_err());
        assert!(step(&a, &w, 0, &cs(&[(0, 1)])).is_err());
    }

    #[test]
    fn run_examples() {
        let a = acb();
        let p = |s: &str| DataWord::parse(s, a.alphabet()).unwrap();
        assert!(!run_exists(&a, &p("a@0 c@1 b@0")).unwrap());
        assert_eq!(rejection_point(&a, &p("a@0 c@1 b@0 a@0")).unwrap(), Some(3));
        assert!(run_exists(&a, &p("a@0 b@0")).unwrap());
        assert!(run_exists(&a, &p("a@0 c@1 b@1")).unwrap());
        assert_eq!(run_exists(&a, &DataWord::empty()), Err(Error::EmptyWord));
    }
}
