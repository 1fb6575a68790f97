use std::collections::HashSet;

use crate::ara::{AlternatingAutomaton, Flag, Model};
use crate::data::DataWord;
use crate::error::{Error, Result};

/// Size guards for [`oracle_run_exists`].
pub const ORACLE_MAX_STATES: usize = 4;
pub const ORACLE_MAX_LENGTH: usize = 6;

/// Same contract as [`crate::ara::run_exists`], searched over every
/// satisfying model instead of the minimal ones.
pub fn oracle_run_exists(a: &AlternatingAutomaton, w: &DataWord) -> Result<bool> {
    let n = a.state_count();
    if n > ORACLE_MAX_STATES || w.len() > ORACLE_MAX_LENGTH {
        return Err(Error::TooLarge(format!(
            "oracle handles at most {ORACLE_MAX_STATES} states and words of length {ORACLE_MAX_LENGTH}"
        )));
    }
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(&l) = w.letters().iter().find(|&&l| l >= a.alphabet().len()) {
        return Err(Error::OutOfRange {
            index: l,
            len: a.alphabet().len(),
        });
    }
    // Satisfying models per (q, letter, flag), as state masks.
    let models = (0..n)
        .flat_map(|q| a.alphabet().letters().flat_map(move |l| Flag::BOTH.map(|f| (q, l, f))))
        .map(|(q, l, f)| {
            let phi = a.delta(q, l, f);
            Model::all_pairs(n)
                .filter(|m| phi.eval(m))
                .map(|m| (m.keep.low_mask(), m.down.low_mask()))
                .collect()
        })
        .collect();
    let mut search = Search {
        a,
        w,
        n,
        models,
        failed: HashSet::new(),
    };
    Ok(search.position(0, search.bit(a.initial(), w.class(0))))
}

/// Depth-first search for a partial run; a configuration set is a bit
/// mask with `(q, class)` at bit `class·n + q`.
struct Search<'a> {
    a: &'a AlternatingAutomaton,
    w: &'a DataWord,
    n: usize,
    models: Vec<Vec<(u64, u64)>>,
    /// `(position, set)` pairs from which no run reaches the end.
    failed: HashSet<(usize, u64)>,
}

impl Search<'_> {
    fn bit(&self, q: usize, class: usize) -> u64 {
        1 << (class * self.n + q)
    }

    fn position(&mut self, i: usize, f: u64) -> bool {
        if i == self.w.len() {
            return true;
        }
        if self.failed.contains(&(i, f)) {
            return false;
        }
        let (letter, here) = (self.w.letter(i), self.w.class(i));
        // Every satisfying model, per configuration of `f`.
        let mut choices: Vec<Vec<u64>> = Vec::new();
        for k in 0..u64::BITS as usize {
            if f >> k & 1 == 0 {
                continue;
            }
            let (q, class) = (k % self.n, k / self.n);
            let flag = usize::from(class != here);
            let slot = (q * self.a.alphabet().len() + letter) * 2 + flag;
            let images: Vec<u64> = self.models[slot]
                .iter()
                .map(|&(keep, down)| keep << (class * self.n) | down << (here * self.n))
                .collect();
            if images.is_empty() {
                self.failed.insert((i, f));
                return false;
            }
            choices.push(images);
        }
        let mut tried = HashSet::new();
        if self.choose(i, &choices, 0, 0, &mut tried) {
            return true;
        }
        self.failed.insert((i, f));
        false
    }

    fn choose(&mut self, i: usize, choices: &[Vec<u64>], k: usize, acc: u64, tried: &mut HashSet<(usize, u64)>) -> bool {
        if !tried.insert((k, acc)) {
            return false;
        }
        if k == choices.len() {
            return self.position(i + 1, acc);
        }
        for idx in 0..choices[k].len() {
            if self.choose(i, choices, k + 1, acc | choices[k][idx], tried) {
                return true;
            }
        }
        false
    }
}
