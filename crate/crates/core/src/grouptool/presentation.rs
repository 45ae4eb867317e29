//! Finitely presented groups and the text syntax for words.
//!
//! Words are written as generator letters with optional signed integer
//! exponents (`ab-1a-2b-1ab2`). Commutators `[x,y]` and parenthesised
//! groups `(w)n` may carry exponents too; `1` is the empty word.

use std::fmt;

use thiserror::Error;

use super::word::{letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown generator '{0}'")]
    UnknownGenerator(char),
    #[error("unexpected character '{0}' at offset {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("malformed presentation: {0}")]
    Presentation(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("generator names must be distinct single letters, got '{0}'")]
    BadGenerator(String),
    #[error("relator {0} references a generator outside the presentation")]
    UnknownGenerator(usize),
    #[error("relator {0} is trivial")]
    TrivialRelator(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators are stored cyclically reduced and must be nonempty.
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            let mut chars = g.chars();
            let ok = matches!((chars.next(), chars.next()), (Some(c), None) if c.is_ascii_alphabetic());
            if !ok || generators[..i].contains(g) {
                return Err(PresentationError::BadGenerator(g.clone()));
            }
        }
        let mut reduced = Vec::with_capacity(relators.len());
        for (i, r) in relators.into_iter().enumerate() {
            if r.generator_bound() > generators.len() {
                return Err(PresentationError::UnknownGenerator(i));
            }
            let c = r.cyclic_reduce();
            if c.is_empty() {
                return Err(PresentationError::TrivialRelator(i));
            }
            reduced.push(c);
        }
        Ok(Presentation { generators, relators: reduced })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, ParseError> {
        parse_word(s, &self.generators)
    }

    pub fn show(&self, w: &Word) -> String {
        w.display(&self.generators).to_string()
    }

    /// Same generators and the same multiset of relators up to rotation and
    /// inversion, in any order.
    pub fn equivalent(&self, other: &Presentation) -> bool {
        if self.generators != other.generators || self.relators.len() != other.relators.len() {
            return false;
        }
        let mut a: Vec<Word> = self.relators.iter().map(Word::cyclic_class).collect();
        let mut b: Vec<Word> = other.relators.iter().map(Word::cyclic_class).collect();
        a.sort();
        b.sort();
        a == b
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} | ", self.generators.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.show(r))?;
        }
        write!(f, ">")
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(ParseError::Unexpected(d, self.pos)),
            None => Err(ParseError::Eof),
        }
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if self.peek() == Some('^') {
            self.pos += 1;
        }
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            if self.pos == start {
                return Ok(1);
            }
            return match self.peek() {
                Some(c) => Err(ParseError::Unexpected(c, self.pos)),
                None => Err(ParseError::Eof),
            };
        }
        let s: String = self.chars[digits_start..self.pos].iter().collect();
        let v: i64 = s.parse().map_err(|_| ParseError::Unexpected(self.chars[digits_start], digits_start))?;
        Ok(if neg { -v } else { v })
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut out = Word::identity();
        loop {
            let atom = match self.peek() {
                Some('[') => {
                    self.pos += 1;
                    let x = self.word()?;
                    self.expect(',')?;
                    let y = self.word()?;
                    self.expect(']')?;
                    Word::commutator(&x, &y)
                }
                Some('(') => {
                    self.pos += 1;
                    let w = self.word()?;
                    self.expect(')')?;
                    w
                }
                Some('1') if out.is_empty() && self.pos + 1 == self.chars.len() => {
                    self.pos += 1;
                    continue;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    self.pos += 1;
                    let g = self
                        .names
                        .iter()
                        .position(|n| n.len() == 1 && n.starts_with(c))
                        .ok_or(ParseError::UnknownGenerator(c))?;
                    Word::new([letter(g, false)])
                }
                _ => return Ok(out),
            };
            let e = self.exponent()?;
            out = out.concat(&atom.pow(e));
        }
    }
}

/// Parse a word over the named generators.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word, ParseError> {
    let mut p = Parser { chars: s.trim().chars().collect(), pos: 0, names };
    let w = p.word()?;
    match p.peek() {
        None => Ok(w),
        Some(c) => Err(ParseError::Unexpected(c, p.pos)),
    }
}

/// Parse `<a,b | r1, r2>` (angle brackets may also be `⟨ ⟩`).
pub fn parse_presentation(s: &str) -> Result<Presentation, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('<')
        .or_else(|| t.strip_prefix('⟨'))
        .and_then(|r| r.strip_suffix('>').or_else(|| r.strip_suffix('⟩')))
        .ok_or_else(|| ParseError::Presentation("expected <generators | relators>".into()))?;
    let (gens, rels) = inner.split_once('|').ok_or_else(|| ParseError::Presentation("missing '|'".into()))?;
    let generators: Vec<String> = gens.split(',').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect();
    let mut relators = Vec::new();
    for r in split_top_level(rels) {
        let r = r.trim();
        if r.is_empty() {
            continue;
        }
        relators.push(parse_word(r, &generators)?);
    }
    Presentation::new(generators, relators).map_err(|e| ParseError::Presentation(e.to_string()))
}

/// Split on commas outside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Presentation `<a,b | r>` with a single relator given in word syntax.
pub fn one_relator(rel: &str) -> Result<Presentation, ParseError> {
    parse_presentation(&format!("<a,b | {rel}>"))
}
