//! Text grammar for words.
//!
//! ```text
//! word := term+
//! term := gen | gen "^" int | "[" word "," word "]" | "(" word ")" "^" int
//! gen  := letter (letter | digit | "_")*
//! ```
//!
//! Terms are separated by whitespace or `*`; `int` is an optionally signed
//! nonzero decimal of any size. As a convenience the parser also accepts an
//! exponent directly after `[...]` and a bare parenthesized group, both
//! strict supersets of the grammar.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::word::{Alphabet, FreeWord, WordError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("exponent must be nonzero")]
    ZeroExponent,
    #[error("empty word (the neutral element is written \"1\")")]
    EmptyWord,
    #[error("expanded word would exceed the letter budget of {budget}")]
    OverBudget { budget: u64 },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Syntax or lookup failure, annotated with a byte offset into the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at offset {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

/// Parses a word over the given alphabet, with no materialization limit.
pub fn parse(text: &str, alphabet: &Arc<Alphabet>) -> Result<FreeWord, ParseError> {
    parse_budgeted(text, alphabet, u64::MAX)
}

/// Parses a word, refusing any grouped power whose expansion would exceed
/// `budget` letters.
pub fn parse_budgeted(
    text: &str,
    alphabet: &Arc<Alphabet>,
    budget: u64,
) -> Result<FreeWord, ParseError> {
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        alphabet,
        budget,
    };
    let word = p.parse_word(true)?;
    p.skip_separators();
    if p.pos < p.bytes.len() {
        return Err(p.err(ParseErrorKind::UnexpectedChar(p.current_char())));
    }
    Ok(word)
}

/// Collects generator names in first-appearance order, for callers that
/// declare no alphabet. Purely lexical: exponents and punctuation are skipped.
pub fn scan_generators(text: &str) -> Vec<String> {
    let bytes = text.as_bytes();
    let mut names: Vec<String> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len()
                && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
            {
                i += 1;
            }
            let name = &text[start..i];
            if !names.iter().any(|n| n == name) {
                names.push(name.to_string());
            }
        } else {
            i += 1;
        }
    }
    names
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    alphabet: &'a Arc<Alphabet>,
    budget: u64,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn current_char(&self) -> char {
        self.text[self.pos..].chars().next().unwrap_or('\u{0}')
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || c == b'*' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn parse_word(&mut self, top_level: bool) -> Result<FreeWord, ParseError> {
        let mut acc = FreeWord::neutral(self.alphabet);
        let mut terms = 0usize;
        loop {
            self.skip_separators();
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') => break,
                _ => {}
            }
            let term = self.parse_term()?;
            acc = acc.concat(&term).map_err(|e| self.err(e.into()))?;
            terms += 1;
        }
        if terms == 0 && top_level {
            return Err(self.err(ParseErrorKind::EmptyWord));
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<FreeWord, ParseError> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let left = self.parse_word(false)?;
                self.expect(b',')?;
                let right = self.parse_word(false)?;
                self.expect(b']')?;
                let comm = left.commutator(&right).map_err(|e| self.err(e.into()))?;
                self.maybe_power(comm)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_word(false)?;
                self.expect(b')')?;
                self.maybe_power(inner)
            }
            Some(c) if (c as char).is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| (c as char).is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let index = self.alphabet.index_of(name).ok_or(ParseError {
                    position: start,
                    kind: ParseErrorKind::UnknownGenerator(name.to_string()),
                })?;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.parse_int()?
                } else {
                    BigInt::one()
                };
                FreeWord::from_runs(self.alphabet, [(index, exp)]).map_err(|e| self.err(e.into()))
            }
            Some(b'1') => {
                // the neutral element, printed by Display as "1"
                self.pos += 1;
                Ok(FreeWord::neutral(self.alphabet))
            }
            Some(_) => Err(self.err(ParseErrorKind::UnexpectedChar(self.current_char()))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    /// Applies `^int` to a grouped term when present, guarding the budget.
    fn maybe_power(&mut self, base: FreeWord) -> Result<FreeWord, ParseError> {
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let exp = self.parse_int()?;
        let needed = base.letter_len() * exp.magnitude();
        if needed.to_u64().is_none_or(|n| n > self.budget) {
            return Err(self.err(ParseErrorKind::OverBudget {
                budget: self.budget,
            }));
        }
        Ok(base.pow(&exp))
    }

    fn parse_int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.err(ParseErrorKind::Expected("an integer exponent")));
        }
        let value: BigInt = self.text[start..self.pos].parse().expect("checked digits");
        if value.is_zero() {
            return Err(ParseError {
                position: start,
                kind: ParseErrorKind::ZeroExponent,
            });
        }
        Ok(value)
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_separators();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(ParseErrorKind::Expected(match c {
                b',' => "','",
                b']' => "']'",
                b')' => "')'",
                _ => "punctuation",
            })))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn parses_plain_terms() {
        let a = ab();
        let w = parse("a b^-1", &a).unwrap();
        assert_eq!(w.to_string(), "a b^-1");
        let w = parse("a*a^-1", &a).unwrap();
        assert!(w.is_neutral());
    }

    #[test]
    fn parses_commutator_brackets() {
        let a = ab();
        let w = parse("[a,b]", &a).unwrap();
        assert_eq!(w.to_string(), "a^-1 b^-1 a b");
        let w = parse("[a b, b a]", &a).unwrap();
        assert_eq!(w.to_string(), "b^-1 a^-2 b^-1 a b^2 a");
    }

    #[test]
    fn parses_grouped_powers() {
        let a = ab();
        assert_eq!(parse("(a b)^2", &a).unwrap().to_string(), "a b a b");
        assert_eq!(parse("(a b)^-1", &a).unwrap().to_string(), "b^-1 a^-1");
        assert_eq!(
            parse("([a,b])^2", &a).unwrap(),
            parse("[a,b]^2", &a).unwrap()
        );
    }

    #[test]
    fn parses_neutral() {
        let a = ab();
        assert!(parse("1", &a).unwrap().is_neutral());
    }

    #[test]
    fn rejects_unknown_generator_with_position() {
        let a = ab();
        let e = parse("a c", &a).unwrap_err();
        assert_eq!(e.position, 2);
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator("c".to_string()));
    }

    #[test]
    fn rejects_zero_exponent() {
        let a = ab();
        let e = parse("a^0", &a).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ZeroExponent);
    }

    #[test]
    fn rejects_trailing_garbage() {
        let a = ab();
        assert!(parse("a )", &a).is_err());
        assert!(parse("[a,b", &a).is_err());
        assert!(parse("", &a).is_err());
    }

    #[test]
    fn budget_guards_grouped_powers() {
        let a = ab();
        let e = parse_budgeted("(a b)^1000", &a, 100).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::OverBudget { budget: 100 }));
        // single-run powers are exempt: no materialization happens
        assert!(parse_budgeted("a^100000000000000000000", &a, 100).is_ok());
    }

    #[test]
    fn roundtrips_display_output() {
        let a = ab();
        for text in ["a b^2 a^-3", "1", "a^-1 b^-1 a b", "b^2 a^-1"] {
            let w = parse(text, &a).unwrap();
            assert_eq!(parse(&w.to_string(), &a).unwrap(), w);
        }
    }

    #[test]
    fn scans_generators_in_first_appearance_order() {
        assert_eq!(scan_generators("[c a, a b]^2"), vec!["c", "a", "b"]);
        assert_eq!(scan_generators("x1 x_2^3"), vec!["x1", "x_2"]);
    }
}
