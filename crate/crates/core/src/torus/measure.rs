use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::torus::{Membership, PiecewiseTranslation};
use crate::word::Symbol;

/// Default sample count for Monte Carlo estimates.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;

const SHARDS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureMethod {
    Exact,
    MonteCarlo,
}

/// Cell measures `A_i` and the two identities they satisfy:
/// `a + Σ A_i n_i ≡ 0` modulo `Z^k`, and `Σ A_i = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub method: MeasureMethod,
    pub samples: u64,
    pub measures: Vec<f64>,
    pub measure_std_errors: Vec<f64>,
    /// `a + Σ A_i n_i`, componentwise.
    pub translation_sum: Vec<f64>,
    /// Distance of each component of `translation_sum` to the nearest integer.
    pub translation_residual: Vec<f64>,
    pub translation_std_errors: Vec<f64>,
    /// `Σ A_i - 1`.
    pub volume_residual: f64,
    pub volume_std_error: f64,
}

impl MeasureReport {
    /// Both identities within `sigmas` standard errors, or within `tol` when
    /// the error estimate is zero.
    pub fn holds(&self, sigmas: f64, tol: f64) -> bool {
        let ok = |r: f64, se: f64| r.abs() <= (sigmas * se).max(tol);
        self.translation_residual.iter().zip(&self.translation_std_errors).all(|(r, s)| ok(*r, *s))
            && ok(self.volume_residual, self.volume_std_error)
    }

    pub fn max_translation_residual(&self) -> f64 {
        self.translation_residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn frac_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn translation_sum(map: &PiecewiseTranslation, measures: &[f64]) -> Vec<f64> {
    let mut sum = map.translation().vector().to_vec();
    for (cell, m) in map.cells().iter().zip(measures) {
        for (s, n) in sum.iter_mut().zip(&cell.offset) {
            *s += m * *n as f64;
        }
    }
    sum
}

/// Identities from exact cell measures (intervals, polygons, or hints).
pub fn exact_measure_identities(map: &PiecewiseTranslation) -> Result<MeasureReport> {
    let measures = map
        .cells()
        .iter()
        .map(|c| {
            c.exact_measure()
                .ok_or_else(|| Error::InvalidArguments(format!("cell {} has no exact measure", c.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = translation_sum(map, &measures);
    let k = map.dim();
    Ok(MeasureReport {
        method: MeasureMethod::Exact,
        samples: 0,
        measure_std_errors: vec![0.0; measures.len()],
        translation_residual: sum.iter().map(|&x| frac_distance(x)).collect(),
        translation_sum: sum,
        translation_std_errors: vec![0.0; k],
        volume_residual: measures.iter().sum::<f64>() - 1.0,
        volume_std_error: 0.0,
        measures,
    })
}

/// Sample `samples` points through `SHARDS` independent streams of one
/// seeded generator, folding per-shard accumulators in shard order.
fn sharded<A, F>(samples: u64, seed: u64, init: impl Fn() -> A + Sync, f: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut A, &mut ChaCha8Rng) + Sync,
{
    (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let n = samples / SHARDS + u64::from(shard < samples % SHARDS);
            let mut acc = init();
            for _ in 0..n {
                f(&mut acc, &mut rng);
            }
            acc
        })
        .collect()
}

fn sample_box(rng: &mut ChaCha8Rng, lo: &[f64], hi: &[f64], out: &mut [f64]) {
    for ((o, l), h) in out.iter_mut().zip(lo).zip(hi) {
        *o = l + (h - l) * rng.random::<f64>();
    }
}

fn inside(map: &PiecewiseTranslation, x: &[f64]) -> Vec<usize> {
    map.cells()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.membership(x, 0.0) == Membership::Inside)
        .map(|(i, _)| i)
        .collect()
}

/// Identities from Monte Carlo measures: uniform samples of the bounding
/// box, each cell measure estimated by its hit frequency times the box
/// volume. Standard errors are those of the corresponding sample means.
pub fn monte_carlo_measure_identities(map: &PiecewiseTranslation, samples: u64, seed: u64) -> Result<MeasureReport> {
    if samples == 0 {
        return Err(Error::InvalidArguments("need at least one sample".into()));
    }
    let (lo, hi) = map.bounds();
    let volume: f64 = lo.iter().zip(hi).map(|(l, h)| h - l).product();
    let m = map.piece_count();
    let k = map.dim();
    let shards = sharded(
        samples,
        seed,
        || vec![0u64; m],
        |hits, rng| {
            let mut x = vec![0.0; k];
            sample_box(rng, lo, hi, &mut x);
            for i in inside(map, &x) {
                hits[i] += 1;
            }
        },
    );
    let mut hits = vec![0u64; m];
    for s in &shards {
        for (h, c) in hits.iter_mut().zip(s) {
            *h += c;
        }
    }
    let n = samples as f64;
    let probs: Vec<f64> = hits.iter().map(|&h| h as f64 / n).collect();
    let measures: Vec<f64> = probs.iter().map(|p| volume * p).collect();
    let measure_std_errors = probs.iter().map(|p| volume * (p * (1.0 - p) / n).sqrt()).collect();
    let sum = translation_sum(map, &measures);
    // Per sample the summand is Y = Σ_i 1[x ∈ D_i] n_i (cells are disjoint).
    let translation_std_errors = (0..k)
        .map(|j| {
            let (mut ey, mut ey2) = (0.0, 0.0);
            for (cell, p) in map.cells().iter().zip(&probs) {
                let y = cell.offset[j] as f64;
                ey += p * y;
                ey2 += p * y * y;
            }
            volume * ((ey2 - ey * ey).max(0.0) / n).sqrt()
        })
        .collect();
    let q: f64 = probs.iter().sum();
    Ok(MeasureReport {
        method: MeasureMethod::MonteCarlo,
        samples,
        measures,
        measure_std_errors,
        translation_residual: sum.iter().map(|&x| frac_distance(x)).collect(),
        translation_sum: sum,
        translation_std_errors,
        volume_residual: volume * q - 1.0,
        volume_std_error: volume * (q * (1.0 - q).max(0.0) / n).sqrt(),
    })
}

/// Fraction of sampled points meeting a coverage condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub samples: u64,
    pub good: u64,
}

impl Coverage {
    pub fn fraction(&self) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.good as f64 / self.samples as f64
    }
}

fn merge(parts: Vec<(u64, u64)>) -> Coverage {
    let (samples, good) = parts.into_iter().fold((0, 0), |(s, g), (a, b)| (s + a, g + b));
    Coverage { samples, good }
}

/// Uniform points of `[0,1)^k`: how many have exactly one lattice translate
/// lying in exactly one cell.
pub fn fundamental_domain_coverage(map: &PiecewiseTranslation, samples: u64, seed: u64) -> Coverage {
    let (lo, hi) = map.bounds();
    let k = map.dim();
    let unit_lo = vec![0.0; k];
    let unit_hi = vec![1.0; k];
    merge(sharded(
        samples,
        seed,
        || (0, 0),
        |(s, g), rng| {
            let mut x = vec![0.0; k];
            sample_box(rng, &unit_lo, &unit_hi, &mut x);
            let ranges: Vec<(i64, i64)> = x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(xi, (l, h))| ((l - xi).floor() as i64, (h - xi).ceil() as i64))
                .collect();
            let mut hits = 0usize;
            let mut n = ranges.iter().map(|r| r.0).collect::<Vec<_>>();
            let mut y = vec![0.0; k];
            'outer: loop {
                for j in 0..k {
                    y[j] = x[j] + n[j] as f64;
                }
                hits += inside(map, &y).len();
                for j in 0..k {
                    if n[j] < ranges[j].1 {
                        n[j] += 1;
                        continue 'outer;
                    }
                    n[j] = ranges[j].0;
                }
                break;
            }
            *s += 1;
            *g += u64::from(hits == 1);
        },
    ))
}

/// Uniform points of the domain: how many have exactly one preimage, that
/// is, lie in exactly one image cell `T(D_i) = D_i + a + n_i`.
pub fn image_coverage(map: &PiecewiseTranslation, samples: u64, seed: u64) -> Coverage {
    let (lo, hi) = map.bounds();
    let k = map.dim();
    merge(sharded(
        samples,
        seed,
        || (0, 0),
        |(s, g), rng| {
            let mut y = vec![0.0; k];
            // Rejection sampling of the domain inside its bounding box.
            loop {
                sample_box(rng, lo, hi, &mut y);
                if !inside(map, &y).is_empty() {
                    break;
                }
            }
            let mut x = vec![0.0; k];
            let pre = map
                .cells()
                .iter()
                .zip(map.steps())
                .filter(|(cell, step)| {
                    for j in 0..k {
                        x[j] = y[j] - step[j];
                    }
                    cell.membership(&x, 0.0) == Membership::Inside
                })
                .count();
            *s += 1;
            *g += u64::from(pre == 1);
        },
    ))
}

/// Exact measures of the length-`n` cylinders of a one-dimensional map on
/// `[0, 1)`: cut at the preimages `T^{-j}` of cell boundaries for `j < n`,
/// code each piece from its midpoint and add up lengths.
pub fn interval_cylinder_measures(map: &PiecewiseTranslation, n: usize) -> Result<BTreeMap<Vec<Symbol>, f64>> {
    let (lo, hi) = map.bounds();
    if map.dim() != 1 || lo[0] != 0.0 || hi[0] != 1.0 {
        return Err(Error::InvalidArguments("exact cylinders need a map on [0, 1)".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArguments("cylinder length must be positive".into()));
    }
    let a = map.translation().vector()[0];
    let mut cuts = vec![0.0, 1.0];
    for cell in map.cells() {
        let (l, h) = cell.bounds().expect("interval cells are bounded");
        for b in [l[0], h[0]] {
            for j in 0..n {
                let c = (b - j as f64 * a).rem_euclid(1.0);
                if c < 1.0 {
                    cuts.push(c);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut out = BTreeMap::new();
    let mut x = [0.0];
    for pair in cuts.windows(2) {
        let len = pair[1] - pair[0];
        if len <= 0.0 {
            continue;
        }
        x[0] = 0.5 * (pair[0] + pair[1]);
        let mut word = Vec::with_capacity(n);
        for _ in 0..n {
            let c = map.locate_with(&x, 0.0).map_err(|hit| {
                Error::DegenerateGeometry(format!("cylinder midpoint hit a boundary ({hit:?})"))
            })?;
            word.push(Symbol(c as u8));
            map.apply_in(&mut x, c);
        }
        *out.entry(word).or_insert(0.0) += len;
    }
    Ok(out)
}

fn clip(poly: &[[f64; 2]], a: [f64; 2], b: [f64; 2]) -> Vec<[f64; 2]> {
    // Keep the part left of the directed line a -> b.
    let side = |p: [f64; 2]| (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (sp, sq) = (side(p), side(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

/// Drop consecutive vertices closer than `1e-12`; clipping against such a
/// sliver edge would use an arbitrary line direction.
fn dedup_vertices(poly: &mut Vec<[f64; 2]>) {
    const EPS: f64 = 1e-12;
    let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() <= EPS && (a[1] - b[1]).abs() <= EPS;
    poly.dedup_by(|a, b| close(*a, *b));
    while poly.len() > 1 && close(poly[0], poly[poly.len() - 1]) {
        poly.pop();
    }
}

/// Intersection of two convex polygons.
pub fn convex_intersection(p: &[[f64; 2]], q: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut q = q.to_vec();
    dedup_vertices(&mut q);
    if crate::torus::shoelace(&q) < 0.0 {
        q.reverse();
    }
    let mut out = p.to_vec();
    dedup_vertices(&mut out);
    if crate::torus::shoelace(&out) < 0.0 {
        out.reverse();
    }
    for i in 0..q.len() {
        if out.len() < 3 {
            return Vec::new();
        }
        out = clip(&out, q[i], q[(i + 1) % q.len()]);
        dedup_vertices(&mut out);
    }
    if out.len() < 3 {
        Vec::new()
    } else {
        out
    }
}

/// Exact measures of the length-`n` cylinders of a map whose cells are all
/// convex polygons, by refinement: `[i v] = D_i ∩ T^{-1}[v]`, where `T^{-1}`
/// on `D_i` is translation by `-(a + n_i)`. Cylinders of area at most
/// `min_area` are dropped.
pub fn polygon_cylinder_measures(
    map: &PiecewiseTranslation,
    n: usize,
    min_area: f64,
) -> Result<BTreeMap<Vec<Symbol>, f64>> {
    if n == 0 {
        return Err(Error::InvalidArguments("cylinder length must be positive".into()));
    }
    let pieces = map
        .cells()
        .iter()
        .map(|c| match &c.geometry {
            crate::torus::CellGeometry::Polygon { vertices } => Ok(vertices.clone()),
            _ => Err(Error::InvalidArguments("polygon cylinders need polygon cells".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut level: Vec<(Vec<Symbol>, Vec<[f64; 2]>)> =
        pieces.iter().enumerate().map(|(i, p)| (vec![Symbol(i as u8)], p.clone())).collect();
    for _ in 1..n {
        level = level
            .par_iter()
            .flat_map_iter(|(word, poly)| {
                pieces.iter().zip(map.steps()).enumerate().filter_map(move |(i, (piece, step))| {
                    let back: Vec<[f64; 2]> = poly.iter().map(|v| [v[0] - step[0], v[1] - step[1]]).collect();
                    let cut = convex_intersection(piece, &back);
                    if cut.is_empty() || crate::torus::shoelace(&cut).abs() <= min_area {
                        return None;
                    }
                    let mut w = Vec::with_capacity(word.len() + 1);
                    w.push(Symbol(i as u8));
                    w.extend_from_slice(word);
                    Some((w, cut))
                })
            })
            .collect();
    }
    Ok(level.into_iter().map(|(w, p)| (w, crate::torus::shoelace(&p).abs())).collect())
}
