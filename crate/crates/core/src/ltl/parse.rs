use std::fmt;

use super::Formula;
use crate::data::{is_name_char, Alphabet};
use crate::error::ParseError;

/// Words that cannot be used as letter names inside formulas.
pub const RESERVED_WORDS: &[&str] = &["true", "false", "up", "nup", "down", "X", "G", "R", "U"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    And,
    Or,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let mut chars = line.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            let pos = (first_line + ln, i + 1);
            let simple = match c {
                '&' => Some(Tok::And),
                '|' => Some(Tok::Or),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                _ => None,
            };
            if let Some(tok) = simple {
                chars.next();
                out.push(Token {
                    tok,
                    line: pos.0,
                    col: pos.1,
                });
            } else if c.is_whitespace() {
                chars.next();
            } else if is_name_char(c) {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if !is_name_char(d) {
                        break;
                    }
                    end = j + d.len_utf8();
                    chars.next();
                }
                out.push(Token {
                    tok: Tok::Ident(line[i..end].to_string()),
                    line: pos.0,
                    col: pos.1,
                });
            } else {
                return Err(ParseError::syntax(
                    pos.0,
                    pos.1,
                    format!("unexpected character `{c}`"),
                ));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    alphabet: &'a Alphabet,
    end: (usize, usize),
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.col))
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::syntax(l, c, msg)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn release(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if self.is_keyword("R") {
            self.pos += 1;
            let right = self.release()?;
            return Ok(Formula::release(left, right));
        }
        if self.is_keyword("U") {
            return Err(self.error("`U` (until) is not available in the safety fragment"));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "X" => {
                self.pos += 1;
                Ok(Formula::next(self.unary()?))
            }
            Some(Tok::Ident(s)) if s == "G" => {
                self.pos += 1;
                Ok(Formula::always(self.unary()?))
            }
            Some(Tok::Ident(s)) if s == "down" => {
                self.pos += 1;
                Ok(Formula::freeze(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of formula"));
        };
        match tok {
            Tok::LParen => {
                self.pos += 1;
                let f = self.release()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(f)
            }
            Tok::Ident(s) => {
                let f = match s.as_str() {
                    "true" => Formula::Top,
                    "false" => Formula::Bot,
                    "up" => Formula::Up,
                    "nup" => Formula::NotUp,
                    "U" => {
                        return Err(
                            self.error("`U` (until) is not available in the safety fragment")
                        )
                    }
                    "R" => return Err(self.error("`R` needs a left operand")),
                    name => match self.alphabet.letter(name) {
                        Some(a) => Formula::Atom(a),
                        None => return Err(ParseError::UnknownLetter(name.to_string())),
                    },
                };
                self.pos += 1;
                Ok(f)
            }
            other => Err(self.error(format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::Ident(_) => "identifier",
        Tok::And => "`&`",
        Tok::Or => "`|`",
        Tok::LParen => "`(`",
        Tok::RParen => "`)`",
    }
}

fn parse_at(text: &str, alphabet: &Alphabet, first_line: usize) -> Result<Formula, ParseError> {
    let tokens = lex(text, first_line)?;
    let last_line = first_line + text.lines().count().saturating_sub(1);
    let mut p = Parser {
        tokens,
        pos: 0,
        alphabet,
        end: (last_line, text.lines().last().map_or(1, |l| l.len() + 1)),
    };
    let f = p.release()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

/// Parses a formula over `alphabet`. Open formulas are accepted.
pub fn parse_formula(text: &str, alphabet: &Alphabet) -> Result<Formula, ParseError> {
    parse_at(text, alphabet, 1)
}

/// A formula file: an `alphabet:` header followed by the formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtlFile {
    pub alphabet: Alphabet,
    pub formula: Formula,
}

pub fn parse_ltl_file(text: &str) -> Result<LtlFile, ParseError> {
    let mut lines = text.lines().enumerate();
    let alphabet = loop {
        let Some((i, line)) = lines.next() else {
            return Err(ParseError::MissingHeader("alphabet"));
        };
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(rest) = line.strip_prefix("alphabet:") else {
            return Err(ParseError::syntax(i + 1, 1, "expected `alphabet:` header"));
        };
        let names: Vec<&str> = rest.split_whitespace().collect();
        if let Some(r) = names.iter().find(|n| RESERVED_WORDS.contains(n)) {
            return Err(ParseError::Invalid(format!(
                "`{r}` is reserved and cannot be a letter"
            )));
        }
        break Alphabet::new(names).map_err(|e| ParseError::Invalid(e.to_string()))?;
    };
    let Some((start, _)) = lines.clone().next() else {
        return Err(ParseError::Invalid("missing formula".into()));
    };
    let body: Vec<&str> = lines.map(|(_, l)| l).collect();
    let formula = parse_at(&body.join("\n"), &alphabet, start + 1)?;
    Ok(LtlFile { alphabet, formula })
}

impl fmt::Display for LtlFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.alphabet.header())?;
        writeln!(f, "{}", self.formula.display(&self.alphabet))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn example_sentence_structure() {
        let al = abc();
        let f = parse_formula("G (b | c | down X G (a | b | X G (a | c | nup)))", &al).unwrap();
        let inner = Formula::always(Formula::any([
            Formula::Atom(0),
            Formula::Atom(2),
            Formula::NotUp,
        ]));
        let middle = Formula::always(Formula::any([
            Formula::Atom(0),
            Formula::Atom(1),
            Formula::next(inner),
        ]));
        let expected = Formula::always(Formula::any([
            Formula::Atom(1),
            Formula::Atom(2),
            Formula::freeze(Formula::next(middle)),
        ]));
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let al = abc();
        let p = |s: &str| parse_formula(s, &al).unwrap();
        assert_eq!(p("true"), Formula::Top);
        assert_eq!(
            p("a | b & c"),
            Formula::or(Formula::Atom(0), Formula::and(Formula::Atom(1), Formula::Atom(2)))
        );
        assert_eq!(
            p("a R b R c"),
            Formula::release(
                Formula::Atom(0),
                Formula::release(Formula::Atom(1), Formula::Atom(2))
            )
        );
        assert_eq!(
            p("a | b R c"),
            Formula::release(Formula::or(Formula::Atom(0), Formula::Atom(1)), Formula::Atom(2))
        );
        assert_eq!(
            p("X a & b"),
            Formula::and(Formula::next(Formula::Atom(0)), Formula::Atom(1))
        );
        assert_eq!(p("G a"), Formula::release(Formula::Bot, Formula::Atom(0)));
    }

    #[test]
    fn errors_carry_positions() {
        let al = abc();
        assert_eq!(
            parse_formula("a U b", &al),
            Err(ParseError::syntax(1, 3, "`U` (until) is not available in the safety fragment"))
        );
        assert_eq!(
            parse_formula("a & d", &al),
            Err(ParseError::UnknownLetter("d".into()))
        );
        assert!(matches!(
            parse_formula("(a & b", &al),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_formula("a b", &al),
            Err(ParseError::Syntax { column: 3, .. })
        ));
        assert!(parse_formula("", &al).is_err());
        assert!(parse_formula("a ! b", &al).is_err());
    }

    #[test]
    fn file_format() {
        let text = "# comment\nalphabet: a b c\nG (a |\n   b)\n";
        let file = parse_ltl_file(text).unwrap();
        assert_eq!(file.alphabet.len(), 3);
        assert_eq!(file.to_string(), "alphabet: a b c\nG (a | b)\n");
        assert_eq!(parse_ltl_file(&file.to_string()).unwrap(), file);
        assert!(matches!(
            parse_ltl_file("alphabet: a\n\na &"),
            Err(ParseError::Syntax { line: 3, .. })
        ));
        assert!(parse_ltl_file("alphabet: a X\na").is_err());
        assert_eq!(
            parse_ltl_file("a & b"),
            Err(ParseError::syntax(1, 1, "expected `alphabet:` header"))
        );
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            (0usize..3).prop_map(Formula::Atom),
            Just(Formula::Top),
            Just(Formula::Bot),
            Just(Formula::Up),
            Just(Formula::NotUp),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::release(a, b)),
                inner.clone().prop_map(Formula::next),
                inner.clone().prop_map(Formula::freeze),
                inner.prop_map(Formula::always),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in arb_formula()) {
            let al = abc();
            let text = f.display(&al).to_string();
            prop_assert_eq!(parse_formula(&text, &al).unwrap(), f);
        }
    }
}
