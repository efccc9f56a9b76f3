//! Criterion benchmarks for `symdyn`; see `benches/symdyn.rs`.
