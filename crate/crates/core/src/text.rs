//! Shared helpers for the line-oriented file formats.

use std::collections::HashMap;

use crate::data::{is_name_char, valid_name};
use crate::error::ParseError;

/// A file split into `key: value` headers and the remaining body lines,
/// with comments removed and 1-based line numbers kept.
pub(crate) struct Document<'a> {
    headers: HashMap<&'static str, (usize, &'a str)>,
    pub body: Vec<(usize, &'a str)>,
}

impl<'a> Document<'a> {
    pub fn split(text: &'a str, keys: &[&'static str]) -> Result<Self, ParseError> {
        let mut headers = HashMap::new();
        let mut body = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let header = keys
                .iter()
                .find_map(|k| Some((*k, line.strip_prefix(k)?.strip_prefix(':')?)));
            match header {
                Some((k, rest)) => {
                    if headers.insert(k, (i + 1, rest.trim())).is_some() {
                        return Err(ParseError::syntax(i + 1, 1, format!("duplicate `{k}:` header")));
                    }
                }
                None => body.push((i + 1, line)),
            }
        }
        Ok(Document { headers, body })
    }

    pub fn header(&self, key: &'static str) -> Result<(usize, &'a str), ParseError> {
        self.headers.get(key).copied().ok_or(ParseError::MissingHeader(key))
    }
}

/// Whitespace-separated names, each checked against the name alphabet.
pub(crate) fn names(line: usize, text: &str) -> Result<Vec<String>, ParseError> {
    text.split_whitespace()
        .map(|n| {
            if valid_name(n) {
                Ok(n.to_string())
            } else {
                Err(ParseError::syntax(line, 1, format!("invalid name `{n}`")))
            }
        })
        .collect()
}

/// Splits `text` into names and single punctuation characters, with the
/// 1-based column of each token.
pub(crate) fn tokens(text: &str) -> Vec<(usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if is_name_char(c) {
            let start = i;
            while i < chars.len() && is_name_char(chars[i]) {
                i += 1;
            }
            out.push((start + 1, chars[start..i].iter().collect()));
        } else {
            out.push((i + 1, c.to_string()));
            i += 1;
        }
    }
    out
}
