//! Factor complexity of codings of torus translations.
//!
//! Words and their complexity live in [`word`], substitutions and Rauzy
//! fractals in [`substitution`], piecewise translations of tori in
//! [`torus`], Rauzy graphs and cycle spaces in [`graph`]. [`catalog`] holds
//! the built-in examples and [`verify`] the check battery run by the CLI.

pub mod catalog;
pub mod error;
pub mod graph;
pub mod substitution;
pub mod torus;
pub mod verify;
pub mod word;

pub use catalog::{Example, ExampleKind};
pub use error::{Error, Result};
pub use graph::{CycleSpaceBasis, CycleVector, GraphStats, Multigraph, RauzyGraph};
pub use substitution::{AbelianizationMatrix, FractalCloud, PerronData, Substitution};
pub use torus::{MinimalityVerdict, Orbit, PiecewiseTranslation, TorusTranslation};
pub use verify::{CheckResult, VerificationReport, VerifyConfig};
pub use word::{Alphabet, ComplexityReport, FiniteWord, LazyWord, StabilizationPolicy, Symbol};
