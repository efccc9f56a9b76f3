//! Finite and lazily generated infinite words, factors and complexity.

mod alphabet;
mod complexity;
pub mod factors;
mod finite;
mod lazy;

pub use alphabet::{Alphabet, Symbol, MAX_ALPHABET};
pub use complexity::{complexity, ComplexityEntry, ComplexityReport, StabilizationPolicy};
pub use factors::{factor_counts, factors};
pub use finite::FiniteWord;
pub use lazy::{LazyWord, Prefix, PrefixBuffer, Step, Traversal, Truncation, WordSource};
