use std::fmt;

use crate::data::{valid_name, Alphabet, DataWord, Letter};
use crate::error::{Error, ParseError, Result};
use crate::ltl::{Formula, RESERVED_WORDS};
use crate::text::{names, Document};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    fn offset(self) -> isize {
        match self {
            Dir::Left => -1,
            Dir::Right => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub next: usize,
    pub write: Letter,
    pub dir: Dir,
}

/// A deterministic machine run on a tape of `2^size` cells; moving off
/// either edge halts it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    tape: Alphabet,
    blank: Letter,
    states: Vec<String>,
    initial: usize,
    /// Indexed by `q·|Σ| + a`.
    delta: Vec<Move>,
    size: usize,
}

/// Largest `size` accepted; tapes have `2^size` cells.
pub const TM_MAX_SIZE: usize = 16;

impl TuringMachine {
    pub fn new(
        tape: Alphabet,
        blank: Letter,
        states: Vec<String>,
        initial: usize,
        delta: Vec<Move>,
        size: usize,
    ) -> Result<Self> {
        if size == 0 || size > TM_MAX_SIZE {
            return Err(Error::Invalid(format!("size must be between 1 and {TM_MAX_SIZE}")));
        }
        if blank >= tape.len() {
            return Err(Error::OutOfRange {
                index: blank,
                len: tape.len(),
            });
        }
        if initial >= states.len() {
            return Err(Error::OutOfRange {
                index: initial,
                len: states.len(),
            });
        }
        if delta.len() != states.len() * tape.len() {
            return Err(Error::Invalid("the transition table must be total".into()));
        }
        if let Some(m) = delta.iter().find(|m| m.next >= states.len() || m.write >= tape.len()) {
            return Err(Error::Invalid(format!("transition {m:?} is out of range")));
        }
        let mut all: Vec<String> = states.clone();
        all.extend(tape.names().iter().cloned());
        all.extend(tape.names().iter().map(|a| format!("{a}^")));
        for d in 1..=size {
            all.push(format!("0_{d}"));
            all.push(format!("1_{d}"));
        }
        for (i, s) in all.iter().enumerate() {
            if !valid_name(s) || RESERVED_WORDS.contains(&s.as_str()) {
                return Err(Error::Invalid(format!("`{s}` cannot be used as a letter")));
            }
            if all[..i].contains(s) {
                return Err(Error::Invalid(format!("`{s}` is used twice in the formula alphabet")));
            }
        }
        Ok(TuringMachine {
            tape,
            blank,
            states,
            initial,
            delta,
            size,
        })
    }

    pub fn tape(&self) -> &Alphabet {
        &self.tape
    }

    pub fn blank(&self) -> Letter {
        self.blank
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn delta(&self, q: usize, a: Letter) -> Move {
        self.delta[q * self.tape.len() + a]
    }

    pub fn cells(&self) -> usize {
        1 << self.size
    }

    /// Letters in one configuration encoding: `1 + 2^n (n + 1)`.
    pub fn encoding_length(&self) -> usize {
        1 + self.cells() * (self.size + 1)
    }

    /// States, then `0_1 1_1 … 0_n 1_n`, then tape letters, then their
    /// head-marked copies `a^`.
    pub fn formula_alphabet(&self) -> Alphabet {
        let mut out: Vec<String> = self.states.clone();
        for d in 1..=self.size {
            out.push(format!("0_{d}"));
            out.push(format!("1_{d}"));
        }
        out.extend(self.tape.names().iter().cloned());
        out.extend(self.tape.names().iter().map(|a| format!("{a}^")));
        Alphabet::new(out).expect("names checked on construction")
    }

    fn state_letter(&self, q: usize) -> Letter {
        q
    }

    /// `b_d` for `d` in `1..=n`.
    fn bit(&self, b: usize, d: usize) -> Letter {
        self.states.len() + 2 * (d - 1) + b
    }

    fn plain(&self, a: Letter) -> Letter {
        self.states.len() + 2 * self.size + a
    }

    fn hat(&self, a: Letter) -> Letter {
        self.plain(a) + self.tape.len()
    }
}

/// A configuration: state, head position, tape.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Conf {
    state: usize,
    head: usize,
    tape: Vec<Letter>,
}

impl TuringMachine {
    fn start(&self) -> Conf {
        Conf {
            state: self.initial,
            head: 0,
            tape: vec![self.blank; self.cells()],
        }
    }

    fn next(&self, c: &Conf) -> Option<Conf> {
        let m = self.delta(c.state, c.tape[c.head]);
        let head = c.head.checked_add_signed(m.dir.offset()).filter(|&h| h < self.cells())?;
        let mut tape = c.tape.clone();
        tape[c.head] = m.write;
        Some(Conf {
            state: m.next,
            head,
            tape,
        })
    }
}

/// Encodes the first `steps + 1` configurations of the run. Every tape cell
/// keeps one class across configurations; state letters share another.
pub fn encode_tm_run(m: &TuringMachine, steps: usize) -> Result<DataWord> {
    let mut confs = vec![m.start()];
    for k in 0..steps {
        match m.next(&confs[k]) {
            Some(c) => confs.push(c),
            None => {
                return Err(Error::Halted {
                    steps: k,
                    head: confs[k].head,
                })
            }
        }
    }
    let mut letters = Vec::new();
    let mut labels = Vec::new();
    for c in &confs {
        letters.push(m.state_letter(c.state));
        labels.push(0);
        for j in 0..m.cells() {
            for d in 1..=m.size {
                letters.push(m.bit(j >> (m.size - d) & 1, d));
                labels.push(j + 1);
            }
            letters.push(if j == c.head { m.hat(c.tape[j]) } else { m.plain(c.tape[j]) });
            labels.push(j + 1);
        }
    }
    DataWord::canonicalize(letters, &labels)
}

fn atom(a: Letter) -> Formula {
    Formula::Atom(a)
}

/// Any letter of `alphabet` outside `letters`.
fn other_than(m: &TuringMachine, letters: &[Letter]) -> Formula {
    let n = m.formula_alphabet().len();
    Formula::any_letter((0..n).filter(|a| !letters.contains(a)))
}

/// The constraint families of the encoding, each a sentence in negation
/// normal form. Their conjunction is satisfiable iff the run is infinite.
pub fn tm_families(m: &TuringMachine) -> Vec<(String, Formula)> {
    let n = m.size;
    let cell = n + 1;
    let states: Vec<Letter> = (0..m.states.len()).collect();
    let plain: Vec<Letter> = m.tape.letters().map(|a| m.plain(a)).collect();
    let hats: Vec<Letter> = m.tape.letters().map(|a| m.hat(a)).collect();
    let content: Vec<Letter> = plain.iter().chain(&hats).copied().collect();
    let bits_at = |d: usize| [m.bit(0, d), m.bit(1, d)];
    let any = |ls: &[Letter]| Formula::any_letter(ls.iter().copied());
    let not = |ls: &[Letter]| other_than(m, ls);
    let x = Formula::next_n;
    let g = Formula::always;
    let up_and = |f: Formula| Formula::and(f, Formula::Up);
    let mut out: Vec<(String, Formula)> = Vec::new();
    let mut push = |name: String, f: Formula| out.push((name, f));

    // Shape of configuration encodings.
    push("starts-with-state".into(), any(&states));
    push(
        "state-then-zero-address".into(),
        g(Formula::or(
            not(&states),
            Formula::all((1..=n).map(|d| x(d, atom(m.bit(0, d))))),
        )),
    );
    push(
        "address-then-content".into(),
        g(Formula::or(not(&bits_at(n)), x(1, any(&content)))),
    );
    for d in 1..=n {
        for b in 0..2 {
            // b_d keeps its digit unless only ones follow it.
            if d < n {
                let ones_follow = Formula::all((d + 1..=n).map(|e| x(e - d, atom(m.bit(1, e)))));
                push(
                    format!("digit-{b}-{d}-kept"),
                    g(Formula::any([not(&[m.bit(b, d)]), ones_follow, x(cell, atom(m.bit(b, d)))])),
                );
            }
        }
        // 0_d followed by ones flips to 1_d and resets the lower digits.
        let mut alts = vec![not(&[m.bit(0, d)])];
        alts.extend((d + 1..=n).map(|e| x(e - d, not(&[m.bit(1, e)]))));
        alts.push(Formula::all(
            std::iter::once(x(cell, atom(m.bit(1, d)))).chain((d + 1..=n).map(|e| x(cell + e - d, atom(m.bit(0, e))))),
        ));
        push(format!("digit-0-{d}-carry"), g(Formula::any(alts)));
    }
    {
        let mut alts = vec![not(&[m.bit(1, 1)])];
        alts.extend((2..=n).map(|e| x(e - 1, not(&[m.bit(1, e)]))));
        alts.push(x(cell, any(&states)));
        push("last-cell-then-state".into(), g(Formula::any(alts)));
    }
    push(
        "at-most-one-head".into(),
        g(Formula::or(not(&hats), x(1, Formula::release(any(&states), not(&hats))))),
    );
    push(
        "at-least-one-head".into(),
        g(Formula::or(not(&states), x(1, Formula::release(any(&hats), not(&states))))),
    );

    // The initial configuration.
    push(
        "initial".into(),
        Formula::all([
            atom(m.state_letter(m.initial)),
            x(cell, atom(m.hat(m.blank))),
            x(
                1,
                Formula::release(
                    any(&states),
                    Formula::any([any(&states), not(&content), atom(m.plain(m.blank)), atom(m.hat(m.blank))]),
                ),
            ),
        ]),
    );

    // Classes: one per cell address.
    push(
        "cell-one-class".into(),
        g(Formula::or(
            not(&bits_at(1)),
            Formula::freeze(Formula::all((1..=n).map(|k| x(k, Formula::Up)))),
        )),
    );
    for d in 1..=n {
        for b in 0..2 {
            push(
                format!("class-fixes-digit-{b}-{d}"),
                g(Formula::or(
                    not(&[m.bit(b, d)]),
                    Formula::freeze(x(1, g(Formula::or(not(&[m.bit(1 - b, d)]), Formula::NotUp)))),
                )),
            );
        }
    }
    push(
        "cell-survives".into(),
        g(Formula::or(
            not(&content),
            Formula::freeze(x(
                1,
                Formula::release(
                    any(&states),
                    Formula::or(
                        not(&states),
                        x(1, Formula::release(up_and(any(&content)), not(&states))),
                    ),
                ),
            )),
        )),
    );

    // Transitions.
    for a in m.tape.letters() {
        push(
            format!("keep-{}", m.tape.name(a)),
            g(Formula::or(
                not(&[m.plain(a)]),
                Formula::freeze(x(
                    1,
                    Formula::release(
                        up_and(any(&content)),
                        Formula::any([not(&content), Formula::NotUp, atom(m.plain(a)), atom(m.hat(a))]),
                    ),
                )),
            )),
        );
    }
    for q in 0..m.states.len() {
        for a in m.tape.letters() {
            let mv = m.delta(q, a);
            let tag = format!("{}-{}", m.states[q], m.tape.name(a));
            let when_head = |body: Formula| {
                g(Formula::or(
                    not(&[m.state_letter(q)]),
                    x(1, Formula::release(any(&hats), Formula::or(not(&[m.hat(a)]), body))),
                ))
            };
            push(
                format!("next-state-{tag}"),
                when_head(x(
                    1,
                    Formula::release(any(&states), Formula::or(not(&states), atom(m.state_letter(mv.next)))),
                )),
            );
            let written = up_and(atom(m.plain(mv.write)));
            let moved = match mv.dir {
                Dir::Left => Formula::freeze(x(
                    1,
                    Formula::release(any(&hats), Formula::or(not(&hats), x(cell, written))),
                )),
                Dir::Right => Formula::freeze(x(
                    1,
                    Formula::release(
                        up_and(any(&content)),
                        Formula::any([
                            not(&content),
                            Formula::NotUp,
                            Formula::and(atom(m.plain(mv.write)), x(cell, any(&hats))),
                        ]),
                    ),
                )),
            };
            push(format!("write-move-{tag}"), when_head(moved));
            // Moving off an edge halts; no encoding may contain that step.
            let halt = match mv.dir {
                Dir::Left => g(Formula::or(not(&[m.state_letter(q)]), x(cell, not(&[m.hat(a)])))),
                Dir::Right => when_head(x(1, not(&states))),
            };
            push(format!("no-halt-{tag}"), halt);
        }
    }
    out
}

/// The sentence whose models encode infinite runs of `m`, over
/// [`TuringMachine::formula_alphabet`].
pub fn tm_to_formula(m: &TuringMachine) -> Formula {
    Formula::all(tm_families(m).into_iter().map(|(_, f)| f))
}

/// Reads the machine format: headers `tape`, `blank`, `states`, `initial`,
/// `size`, then one line `q, a -> q', a', L|R` per state and letter.
pub fn parse_tm(text: &str) -> Result<TuringMachine, ParseError> {
    let doc = Document::split(text, &["tape", "blank", "states", "initial", "size"])?;
    let (line, t) = doc.header("tape")?;
    let tape = Alphabet::new(names(line, t)?).map_err(|e| ParseError::syntax(line, 1, e.to_string()))?;
    let (_, b) = doc.header("blank")?;
    let blank = tape.letter(b).ok_or_else(|| ParseError::UnknownLetter(b.to_string()))?;
    let (line, s) = doc.header("states")?;
    let states = names(line, s)?;
    let state = |name: &str| {
        states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| ParseError::UnknownState(name.to_string()))
    };
    let letter = |name: &str| tape.letter(name).ok_or_else(|| ParseError::UnknownLetter(name.to_string()));
    let (_, init) = doc.header("initial")?;
    let initial = state(init)?;
    let (line, n) = doc.header("size")?;
    let size: usize = n
        .parse()
        .map_err(|_| ParseError::syntax(line, 1, format!("expected a size, found `{n}`")))?;
    let mut delta: Vec<Option<Move>> = vec![None; states.len() * tape.len()];
    for &(line, text) in &doc.body {
        let err = |msg: &str| ParseError::syntax(line, 1, msg.to_string());
        let (lhs, rhs) = text.split_once("->").ok_or_else(|| err("expected `q, a -> q', a', L|R`"))?;
        let lhs: Vec<&str> = lhs.split(',').map(str::trim).collect();
        let rhs: Vec<&str> = rhs.split(',').map(str::trim).collect();
        let ([q, a], [q2, a2, d]) = (&lhs[..], &rhs[..]) else {
            return Err(err("expected `q, a -> q', a', L|R`"));
        };
        let dir = match *d {
            "L" | "-1" => Dir::Left,
            "R" | "+1" | "1" => Dir::Right,
            other => return Err(err(&format!("unknown direction `{other}`"))),
        };
        let slot = state(q)? * tape.len() + letter(a)?;
        if delta[slot].is_some() {
            return Err(err("transition defined twice"));
        }
        delta[slot] = Some(Move {
            next: state(q2)?,
            write: letter(a2)?,
            dir,
        });
    }
    let delta = delta
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| ParseError::Invalid("the transition table must be total".into()))?;
    TuringMachine::new(tape, blank, states, initial, delta, size).map_err(|e| ParseError::Invalid(e.to_string()))
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tape: {}", self.tape.names().join(" "))?;
        writeln!(f, "blank: {}", self.tape.name(self.blank))?;
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        writeln!(f, "size: {}", self.size)?;
        for q in 0..self.states.len() {
            for a in self.tape.letters() {
                let m = self.delta(q, a);
                let d = if m.dir == Dir::Left { "L" } else { "R" };
                writeln!(
                    f,
                    "{}, {} -> {}, {}, {d}",
                    self.states[q],
                    self.tape.name(a),
                    self.states[m.next],
                    self.tape.name(m.write)
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ltl::{parse_formula, PrefixVerdict};

    pub(crate) const BOUNCE: &str = "\
tape: a b
blank: a
states: p q
initial: p
size: 2
p, a -> q, b, R
p, b -> q, b, R
q, a -> p, b, L
q, b -> p, b, L
";

    #[test]
    fn sizes_and_round_trip() {
        let m = parse_tm(BOUNCE).unwrap();
        assert_eq!(m.formula_alphabet().len(), 10);
        assert_eq!(m.encoding_length(), 13);
        assert_eq!(parse_tm(&m.to_string()).unwrap(), m);
        let w = encode_tm_run(&m, 2).unwrap();
        assert_eq!(w.len(), 39);
        let f = tm_to_formula(&m);
        assert!(f.is_sentence());
        let al = m.formula_alphabet();
        assert_eq!(parse_formula(&f.display(&al).to_string(), &al).unwrap(), f);
    }

    #[test]
    fn digit_constraint_for_one_bit() {
        let m = parse_tm(&BOUNCE.replace("size: 2", "size: 1")).unwrap();
        let al = m.formula_alphabet();
        let fams = tm_families(&m);
        let get = |name: &str| fams.iter().find(|(n, _)| n == name).unwrap().1.clone();
        let expect = parse_formula("G ((p | q | 1_1 | a | b | a^ | b^) | down X G ((p | q | 0_1 | a | b | a^ | b^) | nup))", &al)
            .unwrap();
        assert_eq!(get("class-fixes-digit-0-1"), expect);
    }

    #[test]
    fn halting() {
        let right = parse_tm("tape: a\nblank: a\nstates: p\ninitial: p\nsize: 2\np, a -> p, a, R\n").unwrap();
        assert!(encode_tm_run(&right, 3).is_ok());
        assert_eq!(encode_tm_run(&right, 4), Err(Error::Halted { steps: 3, head: 3 }));
        let left = parse_tm("tape: a\nblank: a\nstates: p\ninitial: p\nsize: 1\np, a -> p, a, L\n").unwrap();
        assert_eq!(encode_tm_run(&left, 1), Err(Error::Halted { steps: 0, head: 0 }));
        let f = tm_to_formula(&left);
        let w = encode_tm_run(&left, 0).unwrap();
        assert_eq!(
            crate::ltl::evaluate_prefix(&f, &left.formula_alphabet(), &w).unwrap(),
            PrefixVerdict::Falsified
        );
    }

    #[test]
    fn bad_machines() {
        assert!(parse_tm("tape: a\nblank: a\nstates: p\ninitial: p\nsize: 1\n").is_err());
        assert!(parse_tm("tape: X\nblank: X\nstates: p\ninitial: p\nsize: 1\np, X -> p, X, R\n").is_err());
        assert!(parse_tm("tape: p\nblank: p\nstates: p\ninitial: p\nsize: 1\np, p -> p, p, R\n").is_err());
    }
}
