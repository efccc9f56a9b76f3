use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest alphabet a [`Symbol`] can index.
pub const MAX_ALPHABET: usize = 256;

/// A letter, stored as its zero-based index in an [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn new(index: usize) -> Result<Self> {
        u8::try_from(index)
            .map(Symbol)
            .map_err(|_| Error::SymbolOutOfRange { symbol: index, size: MAX_ALPHABET })
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite alphabet with optional printable labels.
///
/// Without labels, letter `i` prints as `i + 1`, so the letters of a
/// size-3 alphabet read `1`, `2`, `3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    size: usize,
    labels: Option<Arc<[String]>>,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ALPHABET {
            return Err(Error::InvalidArguments(format!(
                "alphabet size must be in 1..={MAX_ALPHABET}, got {size}"
            )));
        }
        Ok(Alphabet { size, labels: None })
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut alphabet = Alphabet::new(labels.len())?;
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::InvalidArguments("empty letter label".into()));
            }
            if labels[..i].contains(label) {
                return Err(Error::InvalidArguments(format!("duplicate letter label {label:?}")));
            }
        }
        alphabet.labels = Some(labels.into());
        Ok(alphabet)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        symbol.index() < self.size
    }

    pub fn check(&self, symbol: Symbol) -> Result<()> {
        if self.contains(symbol) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange { symbol: symbol.index(), size: self.size })
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.size).map(|i| Symbol(i as u8))
    }

    pub fn label(&self, symbol: Symbol) -> String {
        match &self.labels {
            Some(labels) => labels[symbol.index()].clone(),
            None => (symbol.index() + 1).to_string(),
        }
    }

    pub fn has_custom_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Looks a letter up by its label.
    pub fn parse_label(&self, label: &str) -> Option<Symbol> {
        match &self.labels {
            Some(labels) => labels.iter().position(|l| l == label).map(|i| Symbol(i as u8)),
            None => label
                .parse::<usize>()
                .ok()
                .filter(|&i| i >= 1 && i <= self.size)
                .map(|i| Symbol((i - 1) as u8)),
        }
    }

    /// True when every label is a single character, so words can be printed
    /// without separators.
    pub fn compact_labels(&self) -> bool {
        match &self.labels {
            Some(labels) => labels.iter().all(|l| l.chars().count() == 1),
            None => self.size <= 9,
        }
    }

    /// Renders a symbol sequence using this alphabet's labels.
    pub fn render(&self, symbols: &[Symbol]) -> String {
        let sep = if self.compact_labels() { "" } else { " " };
        let mut out = String::with_capacity(symbols.len());
        for (i, &s) in symbols.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            out.push_str(&self.label(s));
        }
        out
    }

    /// Parses a word written with this alphabet's labels. Compact alphabets
    /// read one character per letter; others expect whitespace separation.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Symbol>> {
        let lookup = |tok: &str| {
            self.parse_label(tok)
                .ok_or_else(|| Error::Format(format!("unknown letter {tok:?}")))
        };
        if self.compact_labels() && !text.contains(char::is_whitespace) {
            let mut buf = [0u8; 4];
            text.chars().map(|c| lookup(c.encode_utf8(&mut buf))).collect()
        } else {
            text.split_whitespace().map(lookup).collect()
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.symbols().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.label(s))?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_labels_are_one_based() {
        let a = Alphabet::new(3).unwrap();
        assert_eq!(a.label(Symbol(0)), "1");
        assert_eq!(a.render(&[Symbol(0), Symbol(2), Symbol(1)]), "132");
        assert_eq!(a.parse_word("132").unwrap(), vec![Symbol(0), Symbol(2), Symbol(1)]);
        assert!(a.parse_word("14").is_err());
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::new(257).is_err());
        assert!(Alphabet::with_labels(["a", "a"]).is_err());
        assert!(Alphabet::with_labels(["a", ""]).is_err());
    }

    #[test]
    fn long_labels_are_space_separated() {
        let a = Alphabet::with_labels(["ab", "c"]).unwrap();
        let w = [Symbol(0), Symbol(1), Symbol(0)];
        assert_eq!(a.render(&w), "ab c ab");
        assert_eq!(a.parse_word("ab c ab").unwrap(), w);
    }
}
