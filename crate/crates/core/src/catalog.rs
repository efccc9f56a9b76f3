//! Built-in examples: each is a word together with the torus translation
//! it codes.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::substitution::{perron, Substitution};
use crate::torus::examples::{hexagon_center, hexagon_default, HEXAGON_DEFAULT_SEED};
use crate::torus::{circle_rotation, minimality_check, MinimalityVerdict, PiecewiseTranslation};
use crate::word::{LazyWord, StabilizationPolicy, Symbol};

/// The golden rotation number `1/φ`.
pub fn golden_alpha() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExampleKind {
    Circle { alpha: f64 },
    KBonacci { k: usize },
    Hexagon { seed: u64 },
}

/// A built-in example.
#[derive(Clone)]
pub struct Example {
    pub name: String,
    pub kind: ExampleKind,
    /// Dimension `k` of the torus.
    pub torus_dim: usize,
    /// Number of pieces `m`.
    pub piece_count: usize,
    pub translation: Vec<f64>,
    pub word: LazyWord,
    /// Explicit piecewise translation, when the pieces are polytopes.
    pub map: Option<Arc<PiecewiseTranslation>>,
    pub policy: StabilizationPolicy,
}

impl std::fmt::Debug for Example {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Example")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("torus_dim", &self.torus_dim)
            .field("piece_count", &self.piece_count)
            .field("translation", &self.translation)
            .finish()
    }
}

impl Example {
    /// Coding of the rotation by `alpha` from `x0 = 0`.
    pub fn circle(alpha: f64) -> Result<Self> {
        let map = Arc::new(circle_rotation(alpha)?);
        let word = map.coding(&[0.0])?;
        Ok(Example {
            name: format!("circle-{alpha}"),
            kind: ExampleKind::Circle { alpha },
            torus_dim: 1,
            piece_count: 2,
            translation: map.translation().vector().to_vec(),
            word,
            map: Some(map),
            policy: StabilizationPolicy::default(),
        })
    }

    /// Fixed point of the k-bonacci substitution. It codes the translation
    /// of `T^{k-1}` by `(1 − f_2, …, 1 − f_k)`, `f` the letter frequencies.
    pub fn k_bonacci(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k-bonacci examples need k >= 2, got {k}")));
        }
        let s = Substitution::k_bonacci(k)?;
        let data = perron(&s.abelianization(), 1e-12)?;
        let translation = data.right[1..].iter().map(|f| 1.0 - f).collect();
        Ok(Example {
            name: format!("kbonacci-{k}"),
            kind: ExampleKind::KBonacci { k },
            torus_dim: k - 1,
            piece_count: k,
            translation,
            word: s.fixed_point(Symbol(0))?,
            map: None,
            policy: StabilizationPolicy::default(),
        })
    }

    /// Coding of the seeded hexagon from its center, with the strict
    /// stabilization policy.
    pub fn hexagon(seed: u64) -> Result<Self> {
        let map = Arc::new(hexagon_default(seed)?);
        let word = map.coding(&hexagon_center(&map))?;
        Ok(Example {
            name: format!("hexagon-{seed}"),
            kind: ExampleKind::Hexagon { seed },
            torus_dim: 2,
            piece_count: map.piece_count(),
            translation: map.translation().vector().to_vec(),
            word,
            map: Some(map),
            policy: StabilizationPolicy::strict(),
        })
    }

    pub fn minimality(&self, bound: i64, precision: f64) -> MinimalityVerdict {
        minimality_check(&self.translation, bound, precision)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.policy.cap = cap;
        self
    }
}

/// Every built-in example: the golden circle, k-bonacci for `k = 2, 3, 4`,
/// and the default hexagon.
pub fn builtin_examples() -> Result<Vec<Example>> {
    Ok(vec![
        Example::circle(golden_alpha())?,
        Example::k_bonacci(2)?,
        Example::k_bonacci(3)?,
        Example::k_bonacci(4)?,
        Example::hexagon(HEXAGON_DEFAULT_SEED)?,
    ])
}

/// Resolve a CLI-style example name: `circle`, `hexagon`, `kbonacci-K`.
pub fn example_by_name(name: &str, alpha: Option<f64>, seed: Option<u64>) -> Result<Example> {
    match name {
        "circle" => Example::circle(alpha.unwrap_or_else(golden_alpha)),
        "hexagon" => Example::hexagon(seed.unwrap_or(HEXAGON_DEFAULT_SEED)),
        "fibonacci" => Example::k_bonacci(2),
        "tribonacci" => Example::k_bonacci(3),
        other => match other.strip_prefix("kbonacci-").and_then(|k| k.parse().ok()) {
            Some(k) => Example::k_bonacci(k),
            None => Err(Error::InvalidArguments(format!("unknown example {other:?}"))),
        },
    }
}
