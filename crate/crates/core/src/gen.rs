//! Seeded random instances for tests and cross-checks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ara::{AlternatingAutomaton, Flag, PosBool};
use crate::data::{Alphabet, DataWord};
use crate::ipcant::{check_distributive, Counter, Transfer, Valuation};
use crate::ltl::Formula;

/// A positive Boolean formula over `n` states with at most `depth` levels
/// of connectives.
pub fn posbool<R: Rng>(rng: &mut R, n: usize, depth: usize) -> PosBool {
    let leaf = |rng: &mut R| match rng.gen_range(0..10) {
        0 => PosBool::Top,
        1 => PosBool::Bot,
        2..=5 => PosBool::State(rng.gen_range(0..n)),
        _ => PosBool::Down(rng.gen_range(0..n)),
    };
    if depth == 0 || rng.gen_bool(0.4) {
        return leaf(rng);
    }
    let a = posbool(rng, n, depth - 1);
    let b = posbool(rng, n, depth - 1);
    if rng.gen_bool(0.5) {
        PosBool::and(a, b)
    } else {
        PosBool::or(a, b)
    }
}

/// An automaton with `n` states and random transitions of depth ≤ 2.
pub fn automaton<R: Rng>(rng: &mut R, alphabet: &Alphabet, n: usize) -> AlternatingAutomaton {
    let mut a = AlternatingAutomaton::with_numbered_states(alphabet.clone(), n, 0).expect("valid names");
    for q in 0..n {
        for l in alphabet.letters() {
            if rng.gen_bool(0.5) {
                a.set_delta_both(q, l, posbool(rng, n, 2)).expect("in range");
            } else {
                for flag in Flag::BOTH {
                    a.set_delta(q, l, flag, posbool(rng, n, 2)).expect("in range");
                }
            }
        }
    }
    a
}

/// A formula with `up`/`nup` only under freeze quantifiers.
pub fn sentence<R: Rng>(rng: &mut R, alphabet: &Alphabet, depth: usize) -> Formula {
    fn go<R: Rng>(rng: &mut R, k: usize, depth: usize, bound: bool) -> Formula {
        if depth == 0 || rng.gen_bool(0.3) {
            return match rng.gen_range(0..10) {
                0 => Formula::Top,
                1 => Formula::Bot,
                6 | 7 if bound => Formula::Up,
                8 | 9 if bound => Formula::NotUp,
                _ => Formula::Atom(rng.gen_range(0..k)),
            };
        }
        match rng.gen_range(0..7) {
            0 => Formula::and(go(rng, k, depth - 1, bound), go(rng, k, depth - 1, bound)),
            1 => Formula::or(go(rng, k, depth - 1, bound), go(rng, k, depth - 1, bound)),
            2 => Formula::next(go(rng, k, depth - 1, bound)),
            3 => Formula::release(go(rng, k, depth - 1, bound), go(rng, k, depth - 1, bound)),
            4 => Formula::always(go(rng, k, depth - 1, bound)),
            5 => Formula::freeze(go(rng, k, depth - 1, true)),
            _ => Formula::Atom(rng.gen_range(0..k)),
        }
    }
    go(rng, alphabet.len(), depth, false)
}

/// A canonical word of length `len` with at most `max_classes` classes.
pub fn word<R: Rng>(rng: &mut R, alphabet: &Alphabet, len: usize, max_classes: usize) -> DataWord {
    let letters: Vec<_> = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
    let labels: Vec<usize> = (0..len).map(|_| rng.gen_range(0..max_classes.max(1))).collect();
    DataWord::canonicalize(letters, &labels).expect("equal lengths")
}

/// Every non-empty subset of a basis of `basis` elements, truncated to a
/// random selection of `count`.
pub fn counters<R: Rng>(rng: &mut R, basis: usize, count: usize) -> Vec<Counter> {
    let mut all: Vec<Counter> = (1..1u64 << basis).collect();
    all.shuffle(rng);
    all.truncate(count.max(1));
    all.sort_unstable();
    all
}

/// A random total map `C → P(C)`, retried until distributive.
pub fn distributive_transfer<R: Rng>(rng: &mut R, counters: &[Counter]) -> Transfer {
    loop {
        let map: BTreeMap<Counter, Vec<Counter>> = counters
            .iter()
            .map(|&c| {
                let img: Vec<Counter> = counters.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
                (c, img)
            })
            .collect();
        let f = Transfer::explicit(map);
        if check_distributive(&f, counters).expect("total") {
            return f;
        }
    }
}

/// A valuation over `counters` with values in `0..=max`.
pub fn valuation<R: Rng>(rng: &mut R, counters: &[Counter], max: u32) -> Valuation {
    Valuation::from_pairs(counters.iter().map(|&c| (c, rng.gen_range(0..=max))))
}

#[cfg(test)]
mod tests {
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    use super::*;

    #[test]
    fn generated_values_are_well_formed() {
        let mut rng = StdRng::seed_from_u64(7);
        let al = Alphabet::new(["a", "b"]).unwrap();
        for _ in 0..50 {
            assert!(sentence(&mut rng, &al, 4).is_sentence());
            let a = automaton(&mut rng, &al, 3);
            assert_eq!(a.state_count(), 3);
            let w = word(&mut rng, &al, 5, 3);
            assert!(w.class_count() <= 3);
        }
        let cs = counters(&mut rng, 2, 3);
        let f = distributive_transfer(&mut rng, &cs);
        assert!(check_distributive(&f, &cs).unwrap());
    }
}
