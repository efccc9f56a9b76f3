//! Built-in piecewise translations: circle rotations and hexagons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::torus::{Cell, CellGeometry, PiecewiseTranslation, TorusTranslation};

/// Rotation by `alpha` on `[0, 1)`, cut at `1 - alpha`.
pub fn circle_rotation(alpha: f64) -> Result<PiecewiseTranslation> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let cut = 1.0 - alpha;
    let cells = vec![
        Cell::new(1, CellGeometry::Interval { lo: 0.0, hi: cut }, vec![0])?.with_measure_hint(cut),
        Cell::new(2, CellGeometry::Interval { lo: cut, hi: 1.0 }, vec![-1])?.with_measure_hint(alpha),
    ];
    PiecewiseTranslation::new(format!("circle({alpha})"), TorusTranslation::new(vec![alpha])?, cells)
}

/// Rotation by `0`: a single cell, every orbit constant.
pub fn identity_rotation() -> Result<PiecewiseTranslation> {
    let cells = vec![Cell::new(1, CellGeometry::Interval { lo: 0.0, hi: 1.0 }, vec![0])?.with_measure_hint(1.0)];
    PiecewiseTranslation::new("circle(0)", TorusTranslation::new(vec![0.0])?, cells)
}

fn det(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn neg(a: [f64; 2]) -> [f64; 2] {
    [-a[0], -a[1]]
}

/// Vertex shape of the reference hexagon, before normalization.
pub const HEXAGON_FIGURE_VERTICES: [[f64; 2]; 6] =
    [[0.0, 0.0], [2.0, 3.0], [4.0, 3.0], [6.0, -3.0], [4.0, -6.0], [2.0, -6.0]];

/// Master seed of the default hexagon.
pub const HEXAGON_DEFAULT_SEED: u64 = 0;

/// Hexagon with opposite edges identified, tiled by the lattice spanned by
/// `v - u` and `w - u`, and cut into three parallelograms.
///
/// With `p = u`, `q = -v`, `r = w` the hexagon is `0, p, p+q, p+q+r, q+r, r`.
/// Cell 1 is `span{q, r}` moved by `u`, cell 2 is `q + span{p, r}` moved by
/// `v`, cell 3 is `span{p, q}` moved by `w`.
///
/// Cells are stored in lattice coordinates, where the lattice becomes `Z^2`;
/// [`PiecewiseTranslation::lattice`] maps them back to the plane.
pub fn hexagon_translation(
    u: [f64; 2],
    v: [f64; 2],
    w: [f64; 2],
    a_choice: [f64; 2],
) -> Result<PiecewiseTranslation> {
    let (p, q, r) = (u, neg(v), w);
    let dets = [det(p, q), det(q, r), det(p, r)];
    let scale = [p, q, r].iter().map(|x| x[0].hypot(x[1])).fold(0.0, f64::max);
    if !dets.iter().all(|d| d.is_finite())
        || dets.iter().any(|d| d.abs() <= 1e-12 * scale * scale)
        || !(dets.iter().all(|&d| d > 0.0) || dets.iter().all(|&d| d < 0.0))
    {
        return Err(Error::DegenerateGeometry(format!(
            "u, v, w do not bound a hexagon (determinants {dets:?})"
        )));
    }
    let b1 = [v[0] - u[0], v[1] - u[1]];
    let b2 = [w[0] - u[0], w[1] - u[1]];
    let covolume = det(b1, b2);
    if covolume.abs() <= 1e-12 * scale * scale {
        return Err(Error::DegenerateGeometry("lattice is degenerate".into()));
    }
    // Plane point -> lattice coordinates.
    let phi = |x: [f64; 2]| [det(x, b2) / covolume, det(b1, x) / covolume];

    let a_lat = phi(a_choice);
    let translation = TorusTranslation::new(a_lat.to_vec())?;
    let a = translation.vector().to_vec();
    let offset_of = |t: [f64; 2]| -> Result<Vec<i64>> {
        let t = phi(t);
        let mut n = Vec::with_capacity(2);
        for c in 0..2 {
            let raw = t[c] - a[c];
            let rounded = raw.round();
            if (raw - rounded).abs() > 1e-9 {
                return Err(Error::InvalidParameter(
                    "a_choice is not congruent to u, v, w modulo the lattice".into(),
                ));
            }
            n.push(rounded as i64);
        }
        Ok(n)
    };

    let zero = [0.0, 0.0];
    let parallelogram = |base: [f64; 2], e: [f64; 2], f: [f64; 2]| {
        let vs = [base, add(base, e), add(add(base, e), f), add(base, f)];
        CellGeometry::Polygon { vertices: vs.iter().map(|&x| phi(x)).collect() }
    };
    let cells = vec![
        Cell::new(1, parallelogram(zero, q, r), offset_of(u)?)?,
        Cell::new(2, parallelogram(q, p, r), offset_of(v)?)?,
        Cell::new(3, parallelogram(zero, p, q), offset_of(w)?)?,
    ];
    let cells = cells
        .into_iter()
        .map(|c| {
            let m = c.exact_measure().unwrap_or(0.0);
            c.with_measure_hint(m)
        })
        .collect();
    PiecewiseTranslation::new("hexagon", translation, cells)?
        .with_lattice(vec![b1.to_vec(), b2.to_vec()])
}

/// Edge vectors `(u, v, w)` of the default hexagon for `seed`: the reference
/// shape with `v` nudged by a seeded offset, rescaled to unit covolume.
pub fn hexagon_default_vectors(seed: u64) -> [[f64; 2]; 3] {
    let h = HEXAGON_FIGURE_VERTICES;
    let p = [h[1][0] / 6.0, h[1][1] / 6.0];
    let q = [(h[2][0] - h[1][0]) / 6.0, (h[2][1] - h[1][1]) / 6.0];
    let r = [(h[3][0] - h[2][0]) / 6.0, (h[3][1] - h[2][1]) / 6.0];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = [rng.random_range(-0.25..0.25) / 6.0, rng.random_range(-0.25..0.25) / 6.0];
    let (u, v, w) = (p, add(neg(q), delta), r);
    let b1 = [v[0] - u[0], v[1] - u[1]];
    let b2 = [w[0] - u[0], w[1] - u[1]];
    let s = det(b1, b2).abs().sqrt().recip();
    let sc = |x: [f64; 2]| [x[0] * s, x[1] * s];
    [sc(u), sc(v), sc(w)]
}

/// The seeded hexagon used by the examples and checks.
pub fn hexagon_default(seed: u64) -> Result<PiecewiseTranslation> {
    let [u, v, w] = hexagon_default_vectors(seed);
    hexagon_translation(u, v, w, u)
}

/// Center of symmetry of a hexagon built by [`hexagon_translation`], in
/// lattice coordinates. The hexagon is centrally symmetric, so this is the
/// middle of its bounding box.
pub fn hexagon_center(map: &PiecewiseTranslation) -> Vec<f64> {
    let (lo, hi) = map.bounds();
    lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect()
}
