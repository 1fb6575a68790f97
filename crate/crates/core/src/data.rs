//! Finite data words: letters from a finite alphabet paired with an
//! equivalence relation on positions, stored as canonical class numbers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use crate::error::{Error, ParseError, Result};

/// Index of a letter in its [`Alphabet`].
pub type Letter = usize;

/// Ordered finite set of letter names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, Letter>,
}

/// True for the characters allowed in letter, state and basis names.
pub fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '-' | '\'' | '.' | '*' | ':')
}

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_name_char)
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::Invalid("alphabet must not be empty".into()));
        }
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if !valid_name(l) {
                return Err(Error::Invalid(format!("invalid letter name `{l}`")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters, index })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.index.get(name).copied()
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.letters[a]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.letters.len()
    }

    /// The `alphabet: a b c` header line used by every file format.
    pub fn header(&self) -> String {
        format!("alphabet: {}", self.letters.join(" "))
    }
}

/// A finite data word with canonically numbered classes.
///
/// Position 0 is in class 0 and every later position either reuses a
/// class seen before or opens the next unused number, so two words are
/// equal iff they have the same letters and the same equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DataWord {
    letters: Vec<Letter>,
    classes: Vec<usize>,
}

impl DataWord {
    pub fn empty() -> Self {
        DataWord {
            letters: Vec::new(),
            classes: Vec::new(),
        }
    }

    /// Renumbers arbitrary class labels by first occurrence.
    pub fn canonicalize<L: Eq + Hash>(letters: Vec<Letter>, labels: &[L]) -> Result<Self> {
        if letters.len() != labels.len() {
            return Err(Error::LengthMismatch {
                letters: letters.len(),
                classes: labels.len(),
            });
        }
        let mut seen: HashMap<&L, usize> = HashMap::new();
        let classes = labels
            .iter()
            .map(|l| {
                let next = seen.len();
                *seen.entry(l).or_insert(next)
            })
            .collect();
        Ok(DataWord { letters, classes })
    }

    /// Like [`DataWord::canonicalize`], with letters given by name.
    pub fn from_names<S: AsRef<str>, L: Eq + Hash>(
        alphabet: &Alphabet,
        letters: &[S],
        labels: &[L],
    ) -> Result<Self> {
        let letters = letters
            .iter()
            .map(|s| {
                alphabet
                    .letter(s.as_ref())
                    .ok_or_else(|| Error::UnknownLetter(s.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        DataWord::canonicalize(letters, labels)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i]
    }

    /// Canonical identifier of the class of position `i`.
    pub fn class(&self, i: usize) -> usize {
        self.classes[i]
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.iter().max().map_or(0, |m| m + 1)
    }

    /// The first `i` positions, `0 < i <= len`.
    pub fn prefix(&self, i: usize) -> Result<DataWord> {
        if i == 0 || i > self.len() {
            return Err(Error::OutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(DataWord {
            letters: self.letters[..i].to_vec(),
            classes: self.classes[..i].to_vec(),
        })
    }

    /// Appends a position; `class` may be at most one past the largest
    /// identifier in use.
    pub fn push(&mut self, letter: Letter, class: usize) -> Result<()> {
        let fresh = self.class_count();
        if class > fresh {
            return Err(Error::Invalid(format!(
                "class {class} skips identifiers (next fresh class is {fresh})"
            )));
        }
        self.letters.push(letter);
        self.classes.push(class);
        Ok(())
    }

    /// Concatenation, treating the two class numberings as disjoint.
    pub fn concat_disjoint(&self, other: &DataWord) -> DataWord {
        let shift = self.class_count();
        let mut labels = self.classes.clone();
        labels.extend(other.classes.iter().map(|c| c + shift));
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        DataWord::canonicalize(letters, &labels).expect("lengths agree")
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<DataWord, ParseError> {
        let mut letters = Vec::new();
        let mut labels = Vec::new();
        for (col, token) in tokens_with_columns(text) {
            let (l, c) = token.split_once('@').ok_or_else(|| {
                ParseError::syntax(1, col, format!("expected `letter@class`, found `{token}`"))
            })?;
            if c.is_empty() {
                return Err(ParseError::syntax(1, col, "empty class label"));
            }
            let a = alphabet
                .letter(l)
                .ok_or_else(|| ParseError::UnknownLetter(l.to_string()))?;
            letters.push(a);
            labels.push(c);
        }
        Ok(DataWord::canonicalize(letters, &labels).expect("lengths agree"))
    }

    /// Space-separated `letter@class` tokens with canonical identifiers.
    pub fn display(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for (i, (&a, &c)) in self.letters.iter().zip(&self.classes).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}@{}", alphabet.name(a), c);
        }
        out
    }
}

fn tokens_with_columns(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - text.as_ptr() as usize + 1, t))
}

/// All canonical class sequences of length `len` using at most
/// `max_classes` classes (restricted growth strings).
pub fn canonical_class_sequences(len: usize, max_classes: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, max: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for c in 0..=used.min(max.saturating_sub(1)) {
            if c == used && used >= max {
                continue;
            }
            cur.push(c);
            go(len, max, cur, used.max(c + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        out.push(Vec::new());
        return out;
    }
    go(len, max_classes, &mut Vec::new(), 0, &mut out);
    out
}

/// Every canonical data word of length `len` over `alphabet` with at most
/// `max_classes` classes.
pub fn all_words(alphabet: &Alphabet, len: usize, max_classes: usize) -> Vec<DataWord> {
    let classes = canonical_class_sequences(len, max_classes);
    let mut out = Vec::new();
    for letters in all_strings(alphabet.len(), len) {
        for cs in &classes {
            out.push(DataWord {
                letters: letters.clone(),
                classes: cs.clone(),
            });
        }
    }
    out
}

/// Every letter string of length `len` over `k` letters.
pub fn all_strings(k: usize, len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..k).map(move |a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let al = abc();
        let w = DataWord::from_names(&al, &["a", "b", "a"], &["x", "y", "x"]).unwrap();
        assert_eq!(w.classes(), &[0, 1, 0]);
        let w = DataWord::from_names(&al, &["a"], &[7]).unwrap();
        assert_eq!(w.classes(), &[0]);
        let w = DataWord::from_names(&al, &["a", "b", "c", "b"], &[9, 9, 3, 3]).unwrap();
        assert_eq!(w.classes(), &[0, 0, 1, 1]);
    }

    #[test]
    fn canonicalize_errors() {
        let al = abc();
        assert_eq!(
            DataWord::from_names(&al, &["a", "b"], &[1]),
            Err(Error::LengthMismatch {
                letters: 2,
                classes: 1
            })
        );
        assert_eq!(
            DataWord::from_names(&al, &["d"], &[1]),
            Err(Error::UnknownLetter("d".into()))
        );
    }

    #[test]
    fn prefix_examples() {
        let al = abc();
        let w = DataWord::parse("a@0 b@1 a@0", &al).unwrap();
        assert_eq!(w.prefix(2).unwrap().display(&al), "a@0 b@1");
        assert_eq!(w.prefix(3).unwrap(), w);
        let w = DataWord::parse("a@0 b@1 c@1", &al).unwrap();
        assert_eq!(w.prefix(1).unwrap().display(&al), "a@0");
        assert!(w.prefix(0).is_err());
        assert!(w.prefix(4).is_err());
    }

    #[test]
    fn parse_and_print() {
        let al = abc();
        let w = DataWord::parse("a@0 c@1 b@0", &al).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.class(0), w.class(2));
        assert_ne!(w.class(0), w.class(1));
        assert!(DataWord::parse("", &al).unwrap().is_empty());
        assert_eq!(DataWord::parse("a@5 b@5", &al).unwrap().display(&al), "a@0 b@0");
    }

    #[test]
    fn parse_errors() {
        let al = abc();
        assert!(matches!(
            DataWord::parse("a@0 b", &al),
            Err(ParseError::Syntax { column: 5, .. })
        ));
        assert_eq!(
            DataWord::parse("z@1", &al),
            Err(ParseError::UnknownLetter("z".into()))
        );
        assert!(DataWord::parse("a@", &al).is_err());
    }

    #[test]
    fn alphabet_rejects_bad_declarations() {
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a b"]).is_err());
    }

    #[test]
    fn restricted_growth_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| canonical_class_sequences(n, n.max(1)).len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
        // at most 3 classes out of 5 positions: S(5,1)+S(5,2)+S(5,3) = 1+15+25
        assert_eq!(canonical_class_sequences(5, 3).len(), 41);
    }

    #[test]
    fn push_keeps_numbering_canonical() {
        let mut w = DataWord::empty();
        w.push(0, 0).unwrap();
        w.push(1, 1).unwrap();
        assert!(w.push(1, 3).is_err());
    }
}
