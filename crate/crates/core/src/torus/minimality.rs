//! Integer relation search for `q_1 a_1 + … + q_k a_k + q = 0` by lattice
//! reduction. A relation disproves minimality; its absence is evidence only.

use serde::Serialize;

/// Default coefficient bound for built-in checks.
pub const DEFAULT_BOUND: i64 = 1000;
/// Default precision for built-in checks.
pub const DEFAULT_PRECISION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalityStatus {
    RelationFound,
    NoRelationUpToBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalityVerdict {
    pub status: MinimalityStatus,
    /// `(q_1, …, q_k, q)` with `|Σ q_i a_i + q| < precision`, first nonzero
    /// entry positive.
    pub relation: Option<Vec<i64>>,
    pub bound: i64,
    pub precision: f64,
}

impl MinimalityVerdict {
    pub fn is_minimal_evidence(&self) -> bool {
        self.status == MinimalityStatus::NoRelationUpToBound
    }
}

/// Search for an integer relation with `|q_i| ≤ bound` among `(a, 1)`.
///
/// The lattice spanned by `e_i ⊕ round(W x_i)`, `x = (a_1, …, a_k, 1)`,
/// `W = 1 / precision`, is LLL-reduced; every reduced vector is tested as
/// a candidate relation.
pub fn minimality_check(a: &[f64], bound: i64, precision: f64) -> MinimalityVerdict {
    let bound = bound.max(1);
    let verdict = |relation: Option<Vec<i64>>| MinimalityVerdict {
        status: if relation.is_some() {
            MinimalityStatus::RelationFound
        } else {
            MinimalityStatus::NoRelationUpToBound
        },
        relation,
        bound,
        precision,
    };
    if precision.is_nan() || precision <= 0.0 || a.iter().any(|x| !x.is_finite()) {
        return verdict(None);
    }
    let mut x: Vec<f64> = a.to_vec();
    x.push(1.0);
    let dim = x.len();
    let weight = precision.recip();
    let mut basis: Vec<Vec<i128>> = (0..dim)
        .map(|i| {
            let mut row = vec![0i128; dim + 1];
            row[i] = 1;
            row[dim] = (weight * x[i]).round() as i128;
            row
        })
        .collect();
    lll(&mut basis, 0.75);

    let mut best: Option<Vec<i64>> = None;
    for row in &basis {
        let c = &row[..dim];
        if c.iter().all(|&v| v == 0) || c[..dim - 1].iter().all(|&v| v == 0) {
            continue;
        }
        if c.iter().any(|&v| v.abs() > bound as i128) {
            continue;
        }
        let value: f64 = c.iter().zip(&x).map(|(&ci, xi)| ci as f64 * xi).sum();
        if value.abs() < precision {
            let mut rel: Vec<i64> = c.iter().map(|&v| v as i64).collect();
            if rel.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) {
                rel.iter_mut().for_each(|v| *v = -*v);
            }
            let norm = |r: &[i64]| r.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
            if best.as_ref().is_none_or(|b| norm(&rel) < norm(b)) {
                best = Some(rel);
            }
        }
    }
    verdict(best)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(basis: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
    let n = basis.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let b: Vec<f64> = basis[i].iter().map(|&v| v as f64).collect();
        let mut v = b.clone();
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 { dot(&b, &star[j]) / norms[j] } else { 0.0 };
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= mu[i][j] * sk;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (star, mu, norms)
}

/// Textbook LLL on integer row vectors. Gram-Schmidt data is recomputed
/// in floating point after every change; dimensions here are tiny.
pub fn lll(basis: &mut [Vec<i128>], delta: f64) {
    let n = basis.len();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu, _) = gram_schmidt(basis);
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i128;
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (_, mu, norms) = gram_schmidt(basis);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_translation_has_relation() {
        let v = minimality_check(&[0.5], 100, 1e-9);
        assert_eq!(v.status, MinimalityStatus::RelationFound);
        assert_eq!(v.relation, Some(vec![2, -1]));
    }

    #[test]
    fn quadratic_irrational_has_none() {
        let v = minimality_check(&[2f64.sqrt() - 1.0], 10_000, 1e-9);
        assert_eq!(v.status, MinimalityStatus::NoRelationUpToBound);
        assert!(v.relation.is_none());
    }

    #[test]
    fn two_dimensional_relation() {
        let v = minimality_check(&[1.0 / 3.0, 2.0 / 7.0], 100, 1e-9);
        assert_eq!(v.status, MinimalityStatus::RelationFound);
        let r = v.relation.unwrap();
        let value = r[0] as f64 / 3.0 + r[1] as f64 * 2.0 / 7.0 + r[2] as f64;
        assert!(value.abs() < 1e-9);
    }

    #[test]
    fn hidden_relation_between_irrationals() {
        let s = 2f64.sqrt();
        let v = minimality_check(&[s - 1.0, 2.0 * s - 2.0], 50, 1e-9);
        assert_eq!(v.relation, Some(vec![2, -1, 0]));
    }

    #[test]
    fn lll_reduces_small_basis() {
        let mut b = vec![vec![1i128, 1, 1], vec![-1, 0, 2], vec![3, 5, 6]];
        lll(&mut b, 0.75);
        let det = |m: &[Vec<i128>]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        assert_eq!(det(&b).abs(), 3);
        assert!(b[0].iter().map(|v| v * v).sum::<i128>() <= 3);
    }
}
