//! The complexity function `n ↦ p(n)` computed from growing prefixes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::factors::distinct_factor_count;
use crate::word::{LazyWord, PrefixBuffer};

/// How far prefixes are grown before a factor count is trusted.
///
/// For each order `n` the prefix starts at `s = max(min_prefix, per_order * n)`
/// letters and doubles. The count is accepted at the first length
/// `L ≥ s · 2^confirm_doublings` where it equals the count at
/// `L / 2^confirm_doublings`; growth stops unstabilized when the next
/// doubling would exceed `cap`. With `confirm_doublings = 1` this is
/// "unchanged across one doubling".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationPolicy {
    pub min_prefix: usize,
    pub per_order: usize,
    pub cap: usize,
    #[serde(default = "one")]
    pub confirm_doublings: u32,
}

fn one() -> u32 {
    1
}

impl Default for StabilizationPolicy {
    fn default() -> Self {
        StabilizationPolicy { min_prefix: 1024, per_order: 64, cap: 1 << 24, confirm_doublings: 1 }
    }
}

impl StabilizationPolicy {
    pub fn with_cap(cap: usize) -> Self {
        StabilizationPolicy { cap, ..Default::default() }
    }

    /// Stricter policy for codings of two-dimensional translations, whose
    /// rarest cylinders can first occur after millions of letters.
    pub fn strict() -> Self {
        StabilizationPolicy { min_prefix: 1 << 20, per_order: 64, cap: 1 << 24, confirm_doublings: 2 }
    }

    pub fn initial_prefix(&self, n: usize) -> usize {
        self.min_prefix.max(self.per_order.saturating_mul(n)).min(self.cap)
    }
}

/// One row of a [`ComplexityReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityEntry {
    pub n: usize,
    /// Number of distinct factors of length `n` seen. Always a lower bound
    /// on the true value; exact when `stabilized` holds.
    pub p: usize,
    pub prefix_len: usize,
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityReport {
    pub alphabet_size: usize,
    pub entries: Vec<ComplexityEntry>,
}

impl ComplexityReport {
    pub fn get(&self, n: usize) -> Option<&ComplexityEntry> {
        self.entries.get(n.checked_sub(1)?).filter(|e| e.n == n)
    }

    pub fn p(&self, n: usize) -> Option<usize> {
        self.get(n).map(|e| e.p)
    }

    pub fn n_max(&self) -> usize {
        self.entries.len()
    }

    pub fn all_stabilized(&self) -> bool {
        self.entries.iter().all(|e| e.stabilized)
    }

    pub fn values(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.p).collect()
    }

    /// CSV with header `n,p_n,prefix_len,stabilized`. When `torus_dim` is
    /// given, a trailing `kn_plus_1` reference column is added.
    pub fn to_csv(&self, torus_dim: Option<usize>) -> String {
        let mut out = String::from("n,p_n,prefix_len,stabilized");
        if torus_dim.is_some() {
            out.push_str(",kn_plus_1");
        }
        out.push('\n');
        for e in &self.entries {
            write!(out, "{},{},{},{}", e.n, e.p, e.prefix_len, e.stabilized).unwrap();
            if let Some(k) = torus_dim {
                write!(out, ",{}", k * e.n + 1).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Computes `p(n)` for `n = 1..=n_max`.
///
/// A row whose prefix hit the cap, or whose stream was truncated, is kept
/// with `stabilized = false`; its count is still a valid lower bound.
pub fn complexity(
    word: &LazyWord,
    n_max: usize,
    policy: StabilizationPolicy,
) -> Result<ComplexityReport> {
    if n_max == 0 {
        return Err(Error::InvalidArguments("n_max must be at least 1".into()));
    }
    if policy.cap == 0 {
        return Err(Error::InvalidArguments("prefix cap must be positive".into()));
    }
    let size = word.alphabet().size();
    let mut buffer = PrefixBuffer::new(word);
    let entries = (1..=n_max).map(|n| order_entry(&mut buffer, n, size, policy)).collect();
    Ok(ComplexityReport { alphabet_size: size, entries })
}

fn order_entry(
    buffer: &mut PrefixBuffer,
    n: usize,
    size: usize,
    policy: StabilizationPolicy,
) -> ComplexityEntry {
    let c = policy.confirm_doublings.clamp(1, 32) as usize;
    let mut len = policy.initial_prefix(n);
    // counts[j] is the count on the prefix of length initial * 2^j.
    let mut counts = Vec::new();
    loop {
        let prefix = buffer.ensure(len);
        let count = distinct_factor_count(prefix, n, size);
        if prefix.len() < len {
            return ComplexityEntry { n, p: count, prefix_len: prefix.len(), stabilized: false };
        }
        counts.push(count);
        let j = counts.len() - 1;
        if j >= c && counts[j - c] == count {
            return ComplexityEntry { n, p: count, prefix_len: len, stabilized: true };
        }
        let next = len.saturating_mul(2);
        if next > policy.cap {
            return ComplexityEntry { n, p: count, prefix_len: len, stabilized: false };
        }
        len = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Alphabet, FiniteWord, Symbol};

    #[test]
    fn constant_word() {
        let w = LazyWord::constant(Alphabet::new(1).unwrap(), Symbol(0));
        let r = complexity(&w, 6, StabilizationPolicy::default()).unwrap();
        assert_eq!(r.values(), vec![1; 6]);
        assert!(r.all_stabilized());
        assert_eq!(r.get(3).unwrap().prefix_len, 2048);
    }

    #[test]
    fn confirmation_window_looks_back_several_doublings() {
        let a = Alphabet::new(2).unwrap();
        // A single 2 at position 5000: invisible to 1024 and 2048.
        let mut text = "1".repeat(5000);
        text.push('2');
        text.push_str(&"1".repeat(100_000));
        let w: LazyWord = FiniteWord::parse(&a, &text).unwrap().into();
        let loose = complexity(&w, 1, StabilizationPolicy::default()).unwrap();
        assert_eq!((loose.p(1), loose.get(1).unwrap().stabilized), (Some(1), true));
        let policy = StabilizationPolicy { confirm_doublings: 3, ..Default::default() };
        let strict = complexity(&w, 1, policy).unwrap();
        assert_eq!(strict.p(1), Some(2));
        assert!(strict.get(1).unwrap().stabilized);
        assert_eq!(strict.get(1).unwrap().prefix_len, 65536);
    }

    #[test]
    fn periodic_word_saturates_at_period() {
        let a = Alphabet::new(2).unwrap();
        let w = LazyWord::periodic(FiniteWord::parse(&a, "11212").unwrap());
        let r = complexity(&w, 8, StabilizationPolicy::default()).unwrap();
        assert_eq!(r.values(), vec![2, 3, 4, 5, 5, 5, 5, 5]);
    }

    #[test]
    fn cap_and_truncation_yield_unstabilized_rows() {
        let a = Alphabet::new(1).unwrap();
        let w = LazyWord::constant(a.clone(), Symbol(0));
        let r = complexity(&w, 2, StabilizationPolicy::with_cap(1500)).unwrap();
        assert!(r.entries.iter().all(|e| !e.stabilized && e.p == 1 && e.prefix_len == 1024));

        let finite: LazyWord = FiniteWord::parse(&a, "1111").unwrap().into();
        let r = complexity(&finite, 5, StabilizationPolicy::default()).unwrap();
        assert_eq!(r.values(), vec![1, 1, 1, 1, 0]);
        assert!(!r.get(1).unwrap().stabilized);
        assert_eq!(r.get(1).unwrap().prefix_len, 4);
    }

    #[test]
    fn csv_layout() {
        let w = LazyWord::constant(Alphabet::new(1).unwrap(), Symbol(0));
        let r = complexity(&w, 2, StabilizationPolicy::default()).unwrap();
        assert_eq!(r.to_csv(None), "n,p_n,prefix_len,stabilized\n1,1,2048,true\n2,1,2048,true\n");
        assert!(r.to_csv(Some(2)).starts_with("n,p_n,prefix_len,stabilized,kn_plus_1\n1,1,2048,true,3\n"));
    }

    #[test]
    fn rejects_zero_order() {
        let w = LazyWord::constant(Alphabet::new(1).unwrap(), Symbol(0));
        assert!(complexity(&w, 0, StabilizationPolicy::default()).is_err());
    }
}
