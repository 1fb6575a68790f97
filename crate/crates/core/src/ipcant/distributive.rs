use rand::seq::SliceRandom;
use rand::Rng;

use super::{Counter, Transfer};
use crate::error::{Error, Result};

fn minimal_masks(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_by_key(|m| m.count_ones());
    let mut kept: Vec<u64> = Vec::new();
    for m in masks {
        if !kept.iter().any(|k| k & !m == 0) {
            kept.push(m);
        }
    }
    kept
}

struct Search<'a> {
    f: &'a dyn Fn(Counter) -> Vec<Counter>,
    counters: &'a [Counter],
    target: Counter,
    target_image: Vec<Counter>,
}

impl Search<'_> {
    fn covered_by_image(&self, union: u64) -> bool {
        self.target_image.iter().any(|&c| c & !union == 0)
    }

    /// False iff some cover extending the partial one, with some choice of
    /// images, has a union admitting no image of the target below it.
    fn ok(&self, covered: u64, unions: &[u64]) -> bool {
        if unions.iter().all(|&u| self.covered_by_image(u)) {
            return true;
        }
        let missing = self.target & !covered;
        if missing == 0 {
            return false;
        }
        let e = missing & missing.wrapping_neg();
        for &d in self.counters {
            if d & e == 0 {
                continue;
            }
            let img = (self.f)(d);
            if img.is_empty() {
                continue;
            }
            let next: Vec<u64> = unions
                .iter()
                .flat_map(|&u| img.iter().map(move |&x| u | x))
                .collect();
            if !self.ok(covered | (d & self.target), &minimal_masks(next)) {
                return false;
            }
        }
        true
    }
}

fn check_total(f: &Transfer, counters: &[Counter]) -> Result<()> {
    if let Transfer::Explicit(m) = f {
        for &c in counters {
            let Some(img) = m.get(&c) else {
                return Err(Error::NotTotal(format!("{c:#b}")));
            };
            if let Some(d) = img.iter().find(|d| !counters.contains(d)) {
                return Err(Error::Invalid(format!("image {d:#b} is not a counter")));
            }
        }
    }
    Ok(())
}

/// The first counter at which `f` fails distributivity, by exhaustive search
/// over irredundant covers. Exponential; meant for small counter sets.
pub fn distributivity_violation(f: &Transfer, counters: &[Counter]) -> Result<Option<Counter>> {
    check_total(f, counters)?;
    let image = |c: Counter| f.image(c).into_owned();
    for &c in counters {
        let s = Search {
            f: &image,
            counters,
            target: c,
            target_image: image(c),
        };
        if !s.ok(0, &[0]) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

pub fn check_distributive(f: &Transfer, counters: &[Counter]) -> Result<bool> {
    Ok(distributivity_violation(f, counters)?.is_none())
}

/// Random covers and image choices; `false` means a violation was found.
pub fn check_distributive_sampled(
    f: &Transfer,
    counters: &[Counter],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<bool> {
    check_total(f, counters)?;
    if counters.is_empty() {
        return Ok(true);
    }
    for _ in 0..samples {
        let &c = counters.choose(rng).unwrap();
        let target = f.image(c);
        let mut covered = 0u64;
        let mut union = 0u64;
        let mut vacuous = false;
        while c & !covered != 0 {
            let missing = c & !covered;
            let options: Vec<Counter> = counters.iter().copied().filter(|d| d & missing != 0).collect();
            let &d = options.choose(rng).unwrap();
            let img = f.image(d);
            let Some(&x) = img.choose(rng) else {
                vacuous = true;
                break;
            };
            covered |= d;
            union |= x;
        }
        if !vacuous && !target.iter().any(|&t| t & !union == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}
