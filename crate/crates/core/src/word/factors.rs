//! Factor extraction over finite prefixes.
//!
//! Factors of length `n` are interned as integers by base-|alphabet| packing
//! whenever `|alphabet|^n` fits in a `u64`; longer factors fall back to
//! slice keys borrowed from the prefix itself.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::word::{FiniteWord, LazyWord, Symbol};

fn check_args(n: usize, len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArguments("factor length must be positive".into()));
    }
    if len < n {
        return Err(Error::InvalidArguments(format!(
            "prefix length {len} is shorter than factor length {n}"
        )));
    }
    Ok(())
}

/// Packing parameters for length-`n` factors over `base` letters, if they fit.
#[derive(Debug, Clone, Copy)]
struct Packing {
    base: u64,
    /// `base^(n-1)`, the weight of the leading letter.
    lead: u64,
}

impl Packing {
    fn new(base: usize, n: usize) -> Option<Self> {
        let base = base.max(2) as u64;
        let n = u32::try_from(n).ok()?;
        base.checked_pow(n)?;
        Some(Packing { base, lead: base.pow(n - 1) })
    }

    /// Rolling keys of every length-`n` window of `symbols`.
    fn keys<'a>(self, symbols: &'a [Symbol], n: usize) -> impl Iterator<Item = u64> + 'a {
        let mut key = 0u64;
        for s in &symbols[..n - 1] {
            key = key * self.base + s.0 as u64;
        }
        symbols[n - 1..].iter().enumerate().map(move |(i, s)| {
            key = key * self.base + s.0 as u64;
            let out = key;
            key -= symbols[i].0 as u64 * self.lead;
            out
        })
    }

    fn decode(self, mut key: u64, n: usize) -> Vec<Symbol> {
        let mut out = vec![Symbol(0); n];
        for slot in out.iter_mut().rev() {
            *slot = Symbol((key % self.base) as u8);
            key /= self.base;
        }
        out
    }
}

/// Number of distinct length-`n` blocks of `symbols`. Zero when the slice is
/// shorter than `n`.
pub fn distinct_factor_count(symbols: &[Symbol], n: usize, alphabet_size: usize) -> usize {
    if n == 0 || symbols.len() < n {
        return 0;
    }
    match Packing::new(alphabet_size, n) {
        Some(p) => p.keys(symbols, n).collect::<HashSet<u64>>().len(),
        None => symbols.windows(n).collect::<HashSet<&[Symbol]>>().len(),
    }
}

/// Occurrence counts of every length-`n` block of `symbols`.
pub fn factor_occurrences(
    symbols: &[Symbol],
    n: usize,
    alphabet_size: usize,
) -> BTreeMap<Vec<Symbol>, u64> {
    if n == 0 || symbols.len() < n {
        return BTreeMap::new();
    }
    match Packing::new(alphabet_size, n) {
        Some(p) => {
            let mut counts: HashMap<u64, u64> = HashMap::new();
            for key in p.keys(symbols, n) {
                *counts.entry(key).or_default() += 1;
            }
            counts.into_iter().map(|(k, c)| (p.decode(k, n), c)).collect()
        }
        None => {
            let mut counts: HashMap<&[Symbol], u64> = HashMap::new();
            for w in symbols.windows(n) {
                *counts.entry(w).or_default() += 1;
            }
            counts.into_iter().map(|(k, c)| (k.to_vec(), c)).collect()
        }
    }
}

/// The distinct length-`n` blocks at positions `0..=len-n` of the prefix of
/// length `len`. A stream truncated before `len` contributes what it has.
pub fn factors(word: &LazyWord, n: usize, len: usize) -> Result<BTreeSet<FiniteWord>> {
    check_args(n, len)?;
    let prefix = word.prefix(len);
    let alphabet = word.alphabet();
    Ok(factor_occurrences(&prefix.symbols, n, alphabet.size())
        .into_keys()
        .map(|s| FiniteWord::from_trusted(alphabet.clone(), s))
        .collect())
}

/// Occurrence count of each length-`n` block in the prefix of length `len`.
/// The counts sum to `len - n + 1` for an untruncated stream.
pub fn factor_counts(word: &LazyWord, n: usize, len: usize) -> Result<BTreeMap<FiniteWord, u64>> {
    check_args(n, len)?;
    let prefix = word.prefix(len);
    let alphabet = word.alphabet();
    Ok(factor_occurrences(&prefix.symbols, n, alphabet.size())
        .into_iter()
        .map(|(s, c)| (FiniteWord::from_trusted(alphabet.clone(), s), c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Alphabet;
    use proptest::prelude::*;

    fn naive(symbols: &[Symbol], n: usize) -> BTreeSet<Vec<Symbol>> {
        let mut out = BTreeSet::new();
        if symbols.len() >= n {
            for i in 0..=symbols.len() - n {
                out.insert(symbols[i..i + n].to_vec());
            }
        }
        out
    }

    #[test]
    fn counts_on_a_short_word() {
        let a = Alphabet::new(2).unwrap();
        let w: LazyWord = FiniteWord::parse(&a, "1211212").unwrap().into();
        let counts = factor_counts(&w, 2, 7).unwrap();
        let rendered: Vec<(String, u64)> =
            counts.iter().map(|(k, &c)| (k.to_string(), c)).collect();
        assert_eq!(
            rendered,
            vec![("11".to_string(), 1), ("12".to_string(), 3), ("21".to_string(), 2)]
        );
        assert_eq!(counts.values().sum::<u64>(), 6);
    }

    #[test]
    fn constant_word_has_one_factor() {
        let a = Alphabet::new(1).unwrap();
        let w = LazyWord::constant(a, Symbol(0));
        let f = factors(&w, 3, 100).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.iter().next().unwrap().to_string(), "111");
    }

    #[test]
    fn invalid_arguments() {
        let a = Alphabet::new(1).unwrap();
        let w = LazyWord::constant(a, Symbol(0));
        assert!(matches!(factors(&w, 5, 4), Err(Error::InvalidArguments(_))));
        assert!(matches!(factor_counts(&w, 0, 4), Err(Error::InvalidArguments(_))));
    }

    #[test]
    fn unpacked_keys_for_long_factors() {
        // 4^40 overflows u64, forcing slice keys.
        let symbols: Vec<Symbol> = (0..200).map(|i| Symbol(((i * 7 + i / 3) % 4) as u8)).collect();
        assert!(Packing::new(4, 40).is_none());
        assert_eq!(distinct_factor_count(&symbols, 40, 4), naive(&symbols, 40).len());
    }

    proptest! {
        #[test]
        fn matches_naive_scan(
            raw in prop::collection::vec(0u8..4, 1..=64),
            size in 1usize..=4,
            n in 1usize..=12,
        ) {
            let symbols: Vec<Symbol> = raw.iter().map(|&s| Symbol(s % size as u8)).collect();
            let expected = naive(&symbols, n);
            let got: BTreeSet<Vec<Symbol>> =
                factor_occurrences(&symbols, n, size).into_keys().collect();
            prop_assert_eq!(&got, &expected);
            prop_assert_eq!(distinct_factor_count(&symbols, n, size), expected.len());
            let total: u64 = factor_occurrences(&symbols, n, size).values().sum();
            let windows = if symbols.len() >= n { symbols.len() - n + 1 } else { 0 };
            prop_assert_eq!(total as usize, windows);
        }

        #[test]
        fn windows_only_gain_factors(
            raw in prop::collection::vec(0u8..3, 2..=64),
            n in 1usize..=6,
            cut in 0usize..64,
        ) {
            let symbols: Vec<Symbol> = raw.iter().map(|&s| Symbol(s)).collect();
            let short = &symbols[..cut.min(symbols.len())];
            let small: BTreeSet<_> = factor_occurrences(short, n, 3).into_keys().collect();
            let large: BTreeSet<_> = factor_occurrences(&symbols, n, 3).into_keys().collect();
            prop_assert!(small.is_subset(&large));
        }
    }
}
