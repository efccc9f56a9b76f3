//! Dominant eigenvalue and Perron eigenvectors of primitive matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substitution::AbelianizationMatrix;

const MAX_ITERATIONS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub dominant_eigenvalue: f64,
    /// Right eigenvector, entrywise positive, entries summing to 1.
    pub right: Vec<f64>,
    /// Left eigenvector, entrywise positive, entries summing to 1.
    pub left: Vec<f64>,
    /// `max(‖Mv − λv‖∞, ‖Mᵀl − λl‖∞)`.
    pub residual: f64,
    pub iterations: usize,
}

fn mat_vec(m: &[f64], k: usize, v: &[f64], transpose: bool) -> Vec<f64> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if transpose { m[j * k + i] } else { m[i * k + j] } * v[j])
                .sum()
        })
        .collect()
}

fn residual(m: &[f64], k: usize, v: &[f64], lambda: f64, transpose: bool) -> f64 {
    mat_vec(m, k, v, transpose)
        .iter()
        .zip(v)
        .map(|(mv, x)| (mv - lambda * x).abs())
        .fold(0.0, f64::max)
}

/// Power iteration on unit-sum vectors. Aims well below `tol` and stops
/// early once the residual stalls at rounding level; the caller checks the
/// final residual against the Rayleigh quotient.
fn iterate(m: &[f64], k: usize, tol: f64, transpose: bool) -> Result<(Vec<f64>, usize)> {
    let mut v = vec![1.0 / k as f64; k];
    let mut best = (f64::INFINITY, v.clone(), 0);
    for it in 1..=MAX_ITERATIONS {
        let mv = mat_vec(m, k, &v, transpose);
        let lambda: f64 = mv.iter().sum();
        let r = mv.iter().zip(&v).map(|(a, x)| (a - lambda * x).abs()).fold(0.0, f64::max);
        if r < best.0 {
            best = (r, v.clone(), it);
        }
        if r < tol / 64.0 || (best.0 < tol && it - best.2 > 64) {
            return Ok((best.1, best.2));
        }
        v = mv.into_iter().map(|x| x / lambda).collect();
    }
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, residual: best.0 })
}

/// Perron data of a primitive matrix by power iteration.
///
/// Fails on non-primitive input and when the dominant eigenvalue does not
/// exceed 1 (a non-expanding substitution has no Rauzy fractal).
pub fn perron(matrix: &AbelianizationMatrix, tol: f64) -> Result<PerronData> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArguments(format!("tolerance must be positive, got {tol}")));
    }
    if !matrix.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let k = matrix.dim();
    let m = matrix.as_f64();
    let (right, it_r) = iterate(&m, k, tol, false)?;
    let (left, it_l) = iterate(&m, k, tol, true)?;

    let mv = mat_vec(&m, k, &right, false);
    let num: f64 = left.iter().zip(&mv).map(|(l, x)| l * x).sum();
    let den: f64 = left.iter().zip(&right).map(|(l, x)| l * x).sum();
    let lambda = num / den;
    let residual = residual(&m, k, &right, lambda, false).max(residual(&m, k, &left, lambda, true));
    if residual >= tol {
        return Err(Error::NoConvergence { iterations: it_r.max(it_l), residual });
    }
    if lambda <= 1.0 + tol {
        return Err(Error::NonExpanding { eigenvalue: lambda });
    }
    Ok(PerronData {
        dominant_eigenvalue: lambda,
        right,
        left,
        residual,
        iterations: it_r.max(it_l),
    })
}
