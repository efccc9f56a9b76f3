use std::fmt;

use serde::{Deserialize, Serialize};

/// Square non-negative integer matrix of letter counts, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianizationMatrix {
    k: usize,
    entries: Vec<u64>,
}

impl AbelianizationMatrix {
    pub fn from_entries(k: usize, entries: Vec<u64>) -> Self {
        assert_eq!(entries.len(), k * k, "matrix must be {k}x{k}");
        AbelianizationMatrix { k, entries }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let k = rows.len();
        assert!(rows.iter().all(|r| r.len() == k), "matrix must be square");
        AbelianizationMatrix { k, entries: rows.concat() }
    }

    pub fn identity(k: usize) -> Self {
        let mut entries = vec![0; k * k];
        for i in 0..k {
            entries[i * k + i] = 1;
        }
        AbelianizationMatrix { k, entries }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.k + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.k).map(<[u64]>::to_vec).collect()
    }

    pub fn column_sums(&self) -> Vec<u64> {
        (0..self.k).map(|j| (0..self.k).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let k = self.k;
        let mut entries = vec![0u64; k * k];
        for i in 0..k {
            for l in 0..k {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..k {
                    entries[i * k + j] += a * other.get(l, j);
                }
            }
        }
        AbelianizationMatrix { k, entries }
    }

    /// `M x` for an integer letter-count vector.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        (0..self.k).map(|i| (0..self.k).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    /// Whether some power `M^p` with `p <= k²` is entrywise positive.
    pub fn is_primitive(&self) -> bool {
        let k = self.k;
        if k == 0 {
            return false;
        }
        let pattern: Vec<bool> = self.entries.iter().map(|&e| e > 0).collect();
        let mut power = pattern.clone();
        for _ in 0..k * k {
            if power.iter().all(|&b| b) {
                return true;
            }
            let mut next = vec![false; k * k];
            for i in 0..k {
                for l in 0..k {
                    if !power[i * k + l] {
                        continue;
                    }
                    for j in 0..k {
                        next[i * k + j] |= pattern[l * k + j];
                    }
                }
            }
            power = next;
        }
        false
    }

    pub(crate) fn as_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|&e| e as f64).collect()
    }
}

impl fmt::Display for AbelianizationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::Substitution;

    #[test]
    fn k_bonacci_matrices() {
        let m3 = Substitution::k_bonacci(3).unwrap().abelianization();
        assert_eq!(m3.rows(), vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let m2 = Substitution::k_bonacci(2).unwrap().abelianization();
        assert_eq!(m2.to_string(), "[[1,1],[1,0]]");
    }

    #[test]
    fn identity_substitution_gives_identity_matrix() {
        let id = Substitution::identity(crate::word::Alphabet::new(4).unwrap());
        assert_eq!(id.abelianization(), AbelianizationMatrix::identity(4));
    }

    #[test]
    fn primitivity() {
        for k in 1..=6 {
            assert!(Substitution::k_bonacci(k).unwrap().abelianization().is_primitive());
        }
        assert!(!AbelianizationMatrix::identity(2).is_primitive());
        assert!(AbelianizationMatrix::identity(1).is_primitive());
        // A cyclic permutation matrix is irreducible but periodic.
        assert!(!AbelianizationMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).is_primitive());
    }
}
