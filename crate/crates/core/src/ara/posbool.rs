use std::fmt;

use crate::stateset::StateSet;

/// Positive Boolean formula over states `q` and register-binding states `↓q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PosBool {
    Top,
    Bot,
    State(usize),
    Down(usize),
    And(Box<PosBool>, Box<PosBool>),
    Or(Box<PosBool>, Box<PosBool>),
}

/// A pair `(Q′, Q′↓)` of chosen successor states: `keep` inherit the
/// current register value, `down` take the class of the current position.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Model {
    pub keep: StateSet,
    pub down: StateSet,
}

impl Model {
    pub fn new(keep: StateSet, down: StateSet) -> Self {
        Model { keep, down }
    }

    pub fn union(&self, other: &Model) -> Model {
        Model {
            keep: self.keep.union(&other.keep),
            down: self.down.union(&other.down),
        }
    }

    pub fn is_subset(&self, other: &Model) -> bool {
        self.keep.is_subset(&other.keep) && self.down.is_subset(&other.down)
    }

    /// `keep ∪ down`.
    pub fn all_states(&self) -> StateSet {
        self.keep.union(&self.down)
    }

    /// Every pair of subsets of `{0, .., n-1}`, in a fixed order.
    pub fn all_pairs(n: usize) -> impl Iterator<Item = Model> {
        assert!(n < 32, "too many states to enumerate model pairs");
        let full = 1u64 << n;
        (0..full).flat_map(move |k| {
            (0..full).map(move |d| Model::new(StateSet::from_mask(k), StateSet::from_mask(d)))
        })
    }
}

/// Keeps the ⊆-minimal elements, sorted.
pub fn minimize(mut models: Vec<Model>) -> Vec<Model> {
    models.sort_by_key(|m| m.keep.len() + m.down.len());
    let mut kept: Vec<Model> = Vec::new();
    for m in models {
        if !kept.iter().any(|k| k.is_subset(&m)) {
            kept.push(m);
        }
    }
    kept.sort();
    kept
}

impl PosBool {
    /// Conjunction with unit and zero simplification.
    pub fn and(a: PosBool, b: PosBool) -> PosBool {
        match (a, b) {
            (PosBool::Bot, _) | (_, PosBool::Bot) => PosBool::Bot,
            (PosBool::Top, x) | (x, PosBool::Top) => x,
            (a, b) => PosBool::And(Box::new(a), Box::new(b)),
        }
    }

    /// Disjunction with unit and zero simplification.
    pub fn or(a: PosBool, b: PosBool) -> PosBool {
        match (a, b) {
            (PosBool::Top, _) | (_, PosBool::Top) => PosBool::Top,
            (PosBool::Bot, x) | (x, PosBool::Bot) => x,
            (a, b) => PosBool::Or(Box::new(a), Box::new(b)),
        }
    }

    /// Satisfaction by a chosen pair of state sets.
    pub fn eval(&self, m: &Model) -> bool {
        match self {
            PosBool::Top => true,
            PosBool::Bot => false,
            PosBool::State(q) => m.keep.contains(*q),
            PosBool::Down(q) => m.down.contains(*q),
            PosBool::And(a, b) => a.eval(m) && b.eval(m),
            PosBool::Or(a, b) => a.eval(m) || b.eval(m),
        }
    }

    /// The ⊆-minimal satisfying pairs; empty iff the formula is unsatisfiable.
    pub fn minimal_models(&self) -> Vec<Model> {
        match self {
            PosBool::Top => vec![Model::default()],
            PosBool::Bot => Vec::new(),
            PosBool::State(q) => vec![Model::new(StateSet::singleton(*q), StateSet::new())],
            PosBool::Down(q) => vec![Model::new(StateSet::new(), StateSet::singleton(*q))],
            PosBool::Or(a, b) => {
                let mut all = a.minimal_models();
                all.extend(b.minimal_models());
                minimize(all)
            }
            PosBool::And(a, b) => {
                let left = a.minimal_models();
                if left.is_empty() {
                    return left;
                }
                let right = b.minimal_models();
                let mut all = Vec::with_capacity(left.len() * right.len());
                for x in &left {
                    for y in &right {
                        all.push(x.union(y));
                    }
                }
                minimize(all)
            }
        }
    }

    /// Swaps `⊤`/`⊥` and `∧`/`∨`.
    pub fn dual(&self) -> PosBool {
        match self {
            PosBool::Top => PosBool::Bot,
            PosBool::Bot => PosBool::Top,
            PosBool::State(q) => PosBool::State(*q),
            PosBool::Down(q) => PosBool::Down(*q),
            PosBool::And(a, b) => PosBool::Or(Box::new(a.dual()), Box::new(b.dual())),
            PosBool::Or(a, b) => PosBool::And(Box::new(a.dual()), Box::new(b.dual())),
        }
    }

    /// Replaces every plain `q` by `↓q`.
    pub fn bind_all(&self) -> PosBool {
        match self {
            PosBool::State(q) | PosBool::Down(q) => PosBool::Down(*q),
            PosBool::And(a, b) => PosBool::And(Box::new(a.bind_all()), Box::new(b.bind_all())),
            PosBool::Or(a, b) => PosBool::Or(Box::new(a.bind_all()), Box::new(b.bind_all())),
            other => other.clone(),
        }
    }

    /// Renames states.
    pub fn map_states(&self, f: &impl Fn(usize) -> usize) -> PosBool {
        match self {
            PosBool::State(q) => PosBool::State(f(*q)),
            PosBool::Down(q) => PosBool::Down(f(*q)),
            PosBool::And(a, b) => PosBool::And(Box::new(a.map_states(f)), Box::new(b.map_states(f))),
            PosBool::Or(a, b) => PosBool::Or(Box::new(a.map_states(f)), Box::new(b.map_states(f))),
            other => other.clone(),
        }
    }

    /// Largest state index mentioned, if any.
    pub fn max_state(&self) -> Option<usize> {
        match self {
            PosBool::State(q) | PosBool::Down(q) => Some(*q),
            PosBool::And(a, b) | PosBool::Or(a, b) => a.max_state().max(b.max_state()),
            _ => None,
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> PosBoolDisplay<'a> {
        PosBoolDisplay {
            formula: self,
            names,
        }
    }
}

pub struct PosBoolDisplay<'a> {
    formula: &'a PosBool,
    names: &'a [String],
}

impl PosBoolDisplay<'_> {
    fn write(&self, f: &PosBool, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = match f {
            PosBool::Or(..) => 1,
            PosBool::And(..) => 2,
            _ => 3,
        };
        if prec < min {
            out.write_str("(")?;
        }
        match f {
            PosBool::Top => out.write_str("true")?,
            PosBool::Bot => out.write_str("false")?,
            PosBool::State(q) => out.write_str(&self.names[*q])?,
            PosBool::Down(q) => write!(out, "d({})", self.names[*q])?,
            PosBool::And(a, b) => {
                self.write(a, 2, out)?;
                out.write_str(" & ")?;
                self.write(b, 3, out)?;
            }
            PosBool::Or(a, b) => {
                self.write(a, 1, out)?;
                out.write_str(" | ")?;
                self.write(b, 2, out)?;
            }
        }
        if prec < min {
            out.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for PosBoolDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.formula, 0, f)
    }
}
