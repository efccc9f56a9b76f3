//! Broken lines of fixed points and their projections, the Rauzy fractal
//! point clouds.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substitution::{perron, PerronData, Substitution};
use crate::word::{Alphabet, LazyWord, Symbol};

/// Lattice path of letter counts of the prefixes of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenLine {
    /// `vertices[j]` is the letter-count vector of the length-`j` prefix.
    pub vertices: Vec<Vec<i64>>,
    /// `step_types[j]` is the letter read between vertex `j` and `j + 1`.
    pub step_types: Vec<Symbol>,
}

/// The first `steps` edges of the broken line of `word`.
pub fn broken_line(word: &LazyWord, steps: usize) -> Result<BrokenLine> {
    if steps == 0 {
        return Err(Error::InvalidArguments("a broken line needs at least one step".into()));
    }
    let k = word.alphabet().size();
    let prefix = word.prefix(steps);
    if prefix.symbols.len() < steps {
        return Err(Error::InvalidArguments(format!(
            "word ended after {} letters, {steps} requested",
            prefix.symbols.len()
        )));
    }
    let mut vertices = Vec::with_capacity(steps + 1);
    let mut current = vec![0i64; k];
    vertices.push(current.clone());
    for s in &prefix.symbols {
        current[s.index()] += 1;
        vertices.push(current.clone());
    }
    Ok(BrokenLine { vertices, step_types: prefix.symbols })
}

/// Projection onto the hyperplane orthogonal to the expanding direction,
/// parallel to that direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    /// Orthonormal basis of the complement of `right`.
    pub basis: Vec<Vec<f64>>,
}

impl Projection {
    pub fn from_perron(data: &PerronData) -> Self {
        Projection {
            right: data.right.clone(),
            left: data.left.clone(),
            basis: complement_basis(&data.right),
        }
    }

    /// `x − (⟨l, x⟩ / ⟨l, v⟩) v`, still in ambient coordinates.
    pub fn kill_expanding(&self, x: &[f64]) -> Vec<f64> {
        let lv = dot(&self.left, &self.right);
        let c = dot(&self.left, x) / lv;
        x.iter().zip(&self.right).map(|(xi, vi)| xi - c * vi).collect()
    }

    /// Coordinates of the projection of `x` in [`Projection::basis`].
    pub fn coordinates(&self, x: &[f64]) -> Vec<f64> {
        let y = self.kill_expanding(x);
        self.basis.iter().map(|b| dot(b, &y)).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal basis of `v^⊥`: the standard basis vectors, processed in
/// index order, with their components along `v` and along earlier results
/// removed. The first `k − 1` independent results are kept.
pub fn complement_basis(v: &[f64]) -> Vec<Vec<f64>> {
    let k = v.len();
    let norm = dot(v, v).sqrt();
    let unit: Vec<f64> = v.iter().map(|x| x / norm).collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k.saturating_sub(1));
    for i in 0..k {
        if basis.len() + 1 == k {
            break;
        }
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        // Two passes of Gram-Schmidt keep the result orthogonal to rounding.
        for _ in 0..2 {
            for b in std::iter::once(&unit).chain(basis.iter()) {
                let c = dot(&e, b);
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = dot(&e, &e).sqrt();
        if n > 1e-8 {
            basis.push(e.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// A finite approximation of a Rauzy fractal with its natural partition.
#[derive(Debug, Clone)]
pub struct FractalCloud {
    pub alphabet: Alphabet,
    /// Projected broken-line vertices, `k − 1` coordinates each.
    pub points: Vec<Vec<f64>>,
    /// Letter following each vertex.
    pub labels: Vec<Symbol>,
    pub projection: Projection,
    /// Largest Euclidean norm among `points`.
    pub radius: f64,
}

/// Projects the first `vertices` vertices of the broken line of the fixed
/// point of `substitution` (from its first prolongable letter).
pub fn fractal_cloud(substitution: &Substitution, vertices: usize, tol: f64) -> Result<FractalCloud> {
    if vertices == 0 {
        return Err(Error::InvalidArguments("cloud needs at least one vertex".into()));
    }
    let data = perron(&substitution.abelianization(), tol)?;
    let seed = substitution.prolongable_letter().ok_or_else(|| {
        Error::InvalidSubstitution("no letter has a prolongable image".into())
    })?;
    let word = substitution.fixed_point(seed)?;
    let projection = Projection::from_perron(&data);
    let k = substitution.alphabet().size();

    let mut points = Vec::with_capacity(vertices);
    let mut labels = Vec::with_capacity(vertices);
    let mut counts = vec![0f64; k];
    let mut radius = 0f64;
    for s in word.iter().take(vertices) {
        // Project the exact counts rather than accumulating steps, so no
        // rounding drift builds up along the line.
        let p = projection.coordinates(&counts);
        radius = radius.max(dot(&p, &p).sqrt());
        points.push(p);
        labels.push(s);
        counts[s.index()] += 1.0;
    }
    Ok(FractalCloud { alphabet: substitution.alphabet().clone(), points, labels, projection, radius })
}

const MAGIC: &[u8; 4] = b"RZYC";

impl FractalCloud {
    pub fn dimension(&self) -> usize {
        self.projection.basis.len()
    }

    /// Projection of each standard basis vector.
    pub fn step_vectors(&self) -> Vec<Vec<f64>> {
        let k = self.alphabet.size();
        (0..k)
            .map(|i| {
                let mut e = vec![0.0; k];
                e[i] = 1.0;
                self.projection.coordinates(&e)
            })
            .collect()
    }

    /// Per-label bounding intervals along each coordinate.
    pub fn piece_bounds(&self) -> Vec<Vec<(f64, f64)>> {
        let d = self.dimension();
        let mut bounds = vec![vec![(f64::INFINITY, f64::NEG_INFINITY); d]; self.alphabet.size()];
        for (p, l) in self.points.iter().zip(&self.labels) {
            for (b, &x) in bounds[l.index()].iter_mut().zip(p) {
                b.0 = b.0.min(x);
                b.1 = b.1.max(x);
            }
        }
        bounds
    }

    /// CSV with header `x1,…,x{k−1},label`.
    pub fn to_csv(&self) -> String {
        let d = self.dimension();
        let mut out = String::new();
        for i in 1..=d {
            write!(out, "x{i},").unwrap();
        }
        out.push_str("label\n");
        for (p, l) in self.points.iter().zip(&self.labels) {
            for x in p {
                write!(out, "{x},").unwrap();
            }
            writeln!(out, "{}", self.alphabet.label(*l)).unwrap();
        }
        out
    }

    /// Binary layout, all little-endian: magic `RZYC`, `k: u32`, `N: u64`,
    /// then `N` records of `k` `f64` values: the `k − 1` coordinates followed
    /// by the one-based letter index.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&(self.alphabet.size() as u32).to_le_bytes())?;
        out.write_all(&(self.points.len() as u64).to_le_bytes())?;
        for (p, l) in self.points.iter().zip(&self.labels) {
            for x in p {
                out.write_all(&x.to_le_bytes())?;
            }
            out.write_all(&((l.index() + 1) as f64).to_le_bytes())?;
        }
        Ok(())
    }
}

/// Points and labels decoded from the binary cloud format.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudRecords {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Symbol>,
}

pub fn read_binary_cloud<R: Read>(mut input: R) -> Result<CloudRecords> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format("missing RZYC magic".into()));
    }
    let mut k = [0u8; 4];
    input.read_exact(&mut k)?;
    let k = u32::from_le_bytes(k) as usize;
    let mut n = [0u8; 8];
    input.read_exact(&mut n)?;
    let n = u64::from_le_bytes(n) as usize;
    if k == 0 {
        return Err(Error::Format("zero alphabet size".into()));
    }
    let mut points = Vec::with_capacity(n.min(1 << 20));
    let mut labels = Vec::with_capacity(n.min(1 << 20));
    let mut buf = [0u8; 8];
    for _ in 0..n {
        let mut p = Vec::with_capacity(k - 1);
        for _ in 0..k - 1 {
            input.read_exact(&mut buf)?;
            p.push(f64::from_le_bytes(buf));
        }
        input.read_exact(&mut buf)?;
        let label = f64::from_le_bytes(buf);
        if label < 1.0 || label > k as f64 || label.fract() != 0.0 {
            return Err(Error::Format(format!("bad label {label}")));
        }
        points.push(p);
        labels.push(Symbol::new(label as usize - 1)?);
    }
    Ok(CloudRecords { k, points, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FiniteWord;

    #[test]
    fn broken_line_of_short_word() {
        let a = Alphabet::new(2).unwrap();
        let w: LazyWord = FiniteWord::parse(&a, "121").unwrap().into();
        let line = broken_line(&w, 3).unwrap();
        assert_eq!(line.vertices, vec![vec![0, 0], vec![1, 0], vec![1, 1], vec![2, 1]]);
        assert_eq!(line.step_types, vec![Symbol(0), Symbol(1), Symbol(0)]);
        assert!(broken_line(&w, 4).is_err());
        assert!(broken_line(&w, 0).is_err());
    }

    #[test]
    fn complement_basis_is_orthonormal() {
        let v = [0.5, 0.3, 0.2];
        let b = complement_basis(&v);
        assert_eq!(b.len(), 2);
        for (i, x) in b.iter().enumerate() {
            assert!(dot(x, &v).abs() < 1e-14);
            for (j, y) in b.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot(x, y) - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cloud_structure() {
        let s3 = Substitution::k_bonacci(3).unwrap();
        let cloud = fractal_cloud(&s3, 5000, 1e-12).unwrap();
        assert_eq!(cloud.dimension(), 2);
        let mut seen = cloud.labels.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 3);
        // Consecutive points differ by the step of the letter between them.
        let steps = cloud.step_vectors();
        for j in 0..cloud.points.len() - 1 {
            let step = &steps[cloud.labels[j].index()];
            for ((a, b), s) in cloud.points[j + 1].iter().zip(&cloud.points[j]).zip(step) {
                assert!((a - b - s).abs() < 1e-9);
            }
        }
        // The expanding direction projects to zero.
        let zero = cloud.projection.coordinates(&cloud.projection.right);
        assert!(zero.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn single_point_cloud_is_the_origin() {
        let cloud = fractal_cloud(&Substitution::k_bonacci(3).unwrap(), 1, 1e-12).unwrap();
        assert_eq!(cloud.points, vec![vec![0.0, 0.0]]);
        assert_eq!(cloud.radius, 0.0);
    }

    #[test]
    fn non_expanding_substitution_has_no_cloud() {
        assert!(matches!(
            fractal_cloud(&Substitution::k_bonacci(1).unwrap(), 10, 1e-12),
            Err(Error::NonExpanding { .. })
        ));
    }

    #[test]
    fn binary_round_trip() {
        let cloud = fractal_cloud(&Substitution::k_bonacci(3).unwrap(), 50, 1e-12).unwrap();
        let mut bytes = Vec::new();
        cloud.write_binary(&mut bytes).unwrap();
        assert_eq!(&bytes[..4], b"RZYC");
        assert_eq!(bytes.len(), 4 + 4 + 8 + 50 * 3 * 8);
        let back = read_binary_cloud(bytes.as_slice()).unwrap();
        assert_eq!(back.k, 3);
        assert_eq!(back.points, cloud.points);
        assert_eq!(back.labels, cloud.labels);
        assert!(read_binary_cloud(&b"XXXX"[..]).is_err());
    }

    #[test]
    fn csv_header() {
        let cloud = fractal_cloud(&Substitution::k_bonacci(2).unwrap(), 3, 1e-12).unwrap();
        let csv = cloud.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x1,label"));
        assert_eq!(lines.next(), Some("0,1"));
        assert_eq!(csv.lines().count(), 4);
    }
}
