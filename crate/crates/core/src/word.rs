use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{arg, Error, Result};

/// A finite word over the alphabet `{0, .., A-1}`.
///
/// Ordering is lexicographic with a proper prefix sorting before its extensions,
/// which is also the preorder of the language trie.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn from_slice(symbols: &[u8]) -> Self {
        Word(symbols.to_vec())
    }

    /// `a^n`.
    pub fn repeat_symbol(a: u8, n: usize) -> Self {
        Word(vec![a; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.0
    }

    pub fn push(&mut self, a: u8) {
        self.0.push(a);
    }

    /// The factor `w_i .. w_j` (1-based, inclusive).
    pub fn subword(&self, i: usize, j: usize) -> Result<Word> {
        if i < 1 || i > j || j > self.len() {
            return arg(format!("subword indices ({i}, {j}) out of range for length {}", self.len()));
        }
        Ok(Word(self.0[i - 1..j].to_vec()))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Concatenation of several words.
    pub fn join<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    pub fn max_symbol(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }

    pub fn check_alphabet(&self, alphabet: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a as usize >= alphabet) {
            Some(a) => arg(format!("symbol {a} outside alphabet of size {alphabet} in word {self}")),
            None => Ok(()),
        }
    }

    /// Length of the longest run of the symbol `a`.
    pub fn longest_run(&self, a: u8) -> usize {
        let mut best = 0;
        let mut cur = 0;
        for &s in &self.0 {
            if s == a {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 0;
            }
        }
        best
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

impl AsRef<[u8]> for Word {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

/// Render a slice of symbols: single digits are concatenated, larger alphabets use `.`.
pub fn format_symbols(symbols: &[u8]) -> String {
    if symbols.iter().all(|&a| a < 10) {
        symbols.iter().map(|&a| char::from(b'0' + a)).collect()
    } else {
        let mut s = symbols.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".");
        if symbols.len() == 1 {
            s.push('.');
        }
        s
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(&self.0))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        if s.contains('.') {
            let body = if s.matches('.').count() == 1 { s.trim_end_matches('.') } else { s };
            body.split('.')
                .map(|t| t.parse::<u8>().map_err(|_| Error::Argument(format!("bad symbol {t:?} in word {s:?}"))))
                .collect::<Result<Vec<u8>>>()
                .map(Word)
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Argument(format!("bad symbol {c:?} in word {s:?}")))
                })
                .collect::<Result<Vec<u8>>>()
                .map(Word)
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout the tests: `w("1011")`.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn subword_examples() {
        let x = w("10110");
        assert_eq!(x.subword(2, 4).unwrap(), w("011"));
        assert_eq!(x.subword(1, 5).unwrap(), w("10110"));
        assert_eq!(x.subword(3, 3).unwrap(), w("1"));
    }

    #[test]
    fn subword_out_of_range() {
        let x = w("10110");
        assert!(matches!(x.subword(0, 2), Err(Error::Argument(_))));
        assert!(matches!(x.subword(3, 2), Err(Error::Argument(_))));
        assert!(matches!(x.subword(2, 6), Err(Error::Argument(_))));
    }

    #[test]
    fn empty_word_is_unique_and_valid() {
        assert_eq!(w(""), Word::empty());
        assert_eq!(Word::empty().len(), 0);
        assert!(Word::empty().check_alphabet(1).is_ok());
    }

    #[test]
    fn prefix_sorts_first() {
        let mut v = vec![w("10"), w("1"), w("0"), w("01")];
        v.sort();
        assert_eq!(v, vec![w("0"), w("01"), w("1"), w("10")]);
    }

    #[test]
    fn large_symbols_use_dots() {
        let x = Word::new(vec![1, 12, 0]);
        assert_eq!(x.to_string(), "1.12.0");
        assert_eq!("1.12.0".parse::<Word>().unwrap(), x);
    }

    #[test]
    fn alphabet_check() {
        assert!(w("0120").check_alphabet(3).is_ok());
        assert!(w("0130").check_alphabet(3).is_err());
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(v in proptest::collection::vec(0u8..20, 0..12)) {
            let x = Word::new(v);
            prop_assert_eq!(x.to_string().parse::<Word>().unwrap(), x);
        }
    }
}
