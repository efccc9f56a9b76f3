use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::Result;
use crate::word::{Alphabet, Symbol};

/// A finite word over an [`Alphabet`].
///
/// Equality, ordering and hashing look at the letters only; the alphabet
/// travels along for printing and validation.
#[derive(Debug, Clone)]
pub struct FiniteWord {
    symbols: Vec<Symbol>,
    alphabet: Alphabet,
}

impl FiniteWord {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        for &s in &symbols {
            alphabet.check(s)?;
        }
        Ok(FiniteWord { symbols, alphabet })
    }

    /// Builds a word without re-validating letters. Callers guarantee that
    /// every symbol belongs to the alphabet.
    pub(crate) fn from_trusted(alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        FiniteWord { symbols, alphabet }
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let symbols = alphabet.parse_word(text)?;
        Ok(FiniteWord { symbols, alphabet: alphabet.clone() })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        FiniteWord { symbols: Vec::new(), alphabet }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn prefix(&self, len: usize) -> FiniteWord {
        FiniteWord::from_trusted(self.alphabet.clone(), self.symbols[..len].to_vec())
    }

    pub fn suffix(&self, len: usize) -> FiniteWord {
        let start = self.symbols.len() - len;
        FiniteWord::from_trusted(self.alphabet.clone(), self.symbols[start..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &[Symbol]) -> bool {
        other.starts_with(&self.symbols)
    }

    /// Letter-count vector, indexed by symbol.
    pub fn abelianization(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.alphabet.size()];
        for s in &self.symbols {
            counts[s.index()] += 1;
        }
        counts
    }
}

impl PartialEq for FiniteWord {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for FiniteWord {}

impl Hash for FiniteWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.symbols.hash(state);
    }
}

impl PartialOrd for FiniteWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbols.cmp(&other.symbols)
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(&self.symbols))
    }
}
