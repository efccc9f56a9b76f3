use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `normal · x ≥ offset` when `closed`, `normal · x > offset` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub closed: bool,
}

/// Shape of a cell. Intervals and polygons are half-open: a boundary piece
/// belongs to the cell exactly when its outward normal points down, or
/// points left on a horizontal tie. Two cells sharing a boundary therefore
/// never both claim it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "geometry", rename_all = "kebab-case")]
pub enum CellGeometry {
    Interval { lo: f64, hi: f64 },
    /// Convex polygon, vertices in either orientation.
    Polygon { vertices: Vec<[f64; 2]> },
    HalfplaneIntersection { halfspaces: Vec<HalfSpace> },
}

/// Result of a membership test with a tolerance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Within the band around the boundary but not exactly on it.
    Ambiguous,
}

/// A piece of a piecewise translation: a convex region and the integer
/// vector added on top of the torus translation when leaving it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub geometry: CellGeometry,
    pub offset: Vec<i64>,
    pub measure_hint: Option<f64>,
    constraints: Vec<HalfSpace>,
    dim: usize,
}

fn outward_closed(normal: &[f64]) -> bool {
    // Lower/left boundaries are included.
    match normal {
        [x] => *x < 0.0,
        [x, y] => *y < 0.0 || (*y == 0.0 && *x < 0.0),
        _ => normal.iter().rev().find(|&&c| c != 0.0).is_some_and(|&c| c < 0.0),
    }
}

impl Cell {
    pub fn new(id: usize, geometry: CellGeometry, offset: Vec<i64>) -> Result<Self> {
        let (dim, constraints) = compile(&geometry)?;
        if offset.len() != dim {
            return Err(Error::InvalidArguments(format!(
                "cell {id}: offset has {} coordinates, geometry has {dim}",
                offset.len()
            )));
        }
        Ok(Cell { id, geometry, offset, measure_hint: None, constraints, dim })
    }

    pub fn with_measure_hint(mut self, measure: f64) -> Self {
        self.measure_hint = Some(measure);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Membership of `x`. Points closer than `eps` to a boundary, without
    /// lying exactly on it, are ambiguous; exact boundary points follow the
    /// half-open convention.
    pub fn membership(&self, x: &[f64], eps: f64) -> Membership {
        let mut ambiguous = false;
        for h in &self.constraints {
            let d: f64 = h.normal.iter().zip(x).map(|(n, xi)| n * xi).sum::<f64>() - h.offset;
            if d >= eps && d > 0.0 {
                continue;
            }
            if d == 0.0 {
                if h.closed {
                    continue;
                }
                return Membership::Outside;
            }
            if d <= -eps {
                return Membership::Outside;
            }
            ambiguous = true;
        }
        if ambiguous {
            Membership::Ambiguous
        } else {
            Membership::Inside
        }
    }

    /// Exact Lebesgue measure for intervals and polygons; the hint otherwise.
    pub fn exact_measure(&self) -> Option<f64> {
        match &self.geometry {
            CellGeometry::Interval { lo, hi } => Some(hi - lo),
            CellGeometry::Polygon { vertices } => Some(shoelace(vertices).abs()),
            CellGeometry::HalfplaneIntersection { .. } => self.measure_hint,
        }
    }

    /// Axis-aligned bounds, when the geometry determines them.
    pub fn bounds(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match &self.geometry {
            CellGeometry::Interval { lo, hi } => Some((vec![*lo], vec![*hi])),
            CellGeometry::Polygon { vertices } => {
                let mut lo = vec![f64::INFINITY; 2];
                let mut hi = vec![f64::NEG_INFINITY; 2];
                for v in vertices {
                    for c in 0..2 {
                        lo[c] = lo[c].min(v[c]);
                        hi[c] = hi[c].max(v[c]);
                    }
                }
                Some((lo, hi))
            }
            CellGeometry::HalfplaneIntersection { .. } => None,
        }
    }
}

/// Signed area, positive for counter-clockwise vertex order.
pub fn shoelace(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

fn compile(geometry: &CellGeometry) -> Result<(usize, Vec<HalfSpace>)> {
    match geometry {
        CellGeometry::Interval { lo, hi } => {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::DegenerateGeometry(format!("empty interval [{lo}, {hi})")));
            }
            Ok((
                1,
                vec![
                    HalfSpace { normal: vec![1.0], offset: *lo, closed: outward_closed(&[-1.0]) },
                    HalfSpace { normal: vec![-1.0], offset: -hi, closed: outward_closed(&[1.0]) },
                ],
            ))
        }
        CellGeometry::Polygon { vertices } => {
            if vertices.len() < 3 {
                return Err(Error::DegenerateGeometry("polygon needs three vertices".into()));
            }
            let area = shoelace(vertices);
            if area.abs() < 1e-15 {
                return Err(Error::DegenerateGeometry("polygon has zero area".into()));
            }
            let ccw: Vec<[f64; 2]> = if area > 0.0 {
                vertices.clone()
            } else {
                vertices.iter().rev().copied().collect()
            };
            let n = ccw.len();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let a = ccw[i];
                let b = ccw[(i + 1) % n];
                let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
                let len = dx.hypot(dy);
                if len == 0.0 {
                    return Err(Error::DegenerateGeometry("repeated polygon vertex".into()));
                }
                // Inward normal of a counter-clockwise edge.
                let inward = [-dy / len, dx / len];
                let offset = inward[0] * a[0] + inward[1] * a[1];
                let outward = [-inward[0], -inward[1]];
                out.push(HalfSpace { normal: inward.to_vec(), offset, closed: outward_closed(&outward) });
            }
            // Convexity: every vertex satisfies every edge constraint.
            for h in &out {
                for v in &ccw {
                    if h.normal[0] * v[0] + h.normal[1] * v[1] - h.offset < -1e-12 {
                        return Err(Error::DegenerateGeometry("polygon is not convex".into()));
                    }
                }
            }
            Ok((2, out))
        }
        CellGeometry::HalfplaneIntersection { halfspaces } => {
            let dim = halfspaces
                .first()
                .map(|h| h.normal.len())
                .ok_or_else(|| Error::DegenerateGeometry("no half-spaces".into()))?;
            let mut out = Vec::with_capacity(halfspaces.len());
            for h in halfspaces {
                let norm = h.normal.iter().map(|x| x * x).sum::<f64>().sqrt();
                if h.normal.len() != dim || norm == 0.0 {
                    return Err(Error::DegenerateGeometry("bad half-space normal".into()));
                }
                out.push(HalfSpace {
                    normal: h.normal.iter().map(|x| x / norm).collect(),
                    offset: h.offset / norm,
                    closed: h.closed,
                });
            }
            Ok((dim, out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_is_half_open() {
        let c = Cell::new(1, CellGeometry::Interval { lo: 0.0, hi: 0.75 }, vec![0]).unwrap();
        assert_eq!(c.membership(&[0.0], 1e-9), Membership::Inside);
        assert_eq!(c.membership(&[0.75], 1e-9), Membership::Outside);
        assert_eq!(c.membership(&[0.5], 1e-9), Membership::Inside);
        assert_eq!(c.membership(&[0.75 - 1e-12], 1e-9), Membership::Ambiguous);
        assert_eq!(c.membership(&[1e-12], 1e-9), Membership::Ambiguous);
        assert_eq!(c.membership(&[1e-12], 0.0), Membership::Inside);
        assert_eq!(c.exact_measure(), Some(0.75));
    }

    #[test]
    fn unit_square_includes_lower_left_edges_only() {
        let sq = CellGeometry::Polygon { vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]] };
        let c = Cell::new(1, sq, vec![0, 0]).unwrap();
        assert_eq!(c.membership(&[0.0, 0.5], 0.0), Membership::Inside);
        assert_eq!(c.membership(&[0.5, 0.0], 0.0), Membership::Inside);
        assert_eq!(c.membership(&[1.0, 0.5], 0.0), Membership::Outside);
        assert_eq!(c.membership(&[0.5, 1.0], 0.0), Membership::Outside);
        assert_eq!(c.exact_measure(), Some(1.0));
    }

    #[test]
    fn shared_slanted_edge_belongs_to_one_side() {
        let left = Cell::new(
            1,
            CellGeometry::Polygon { vertices: vec![[0.0, 0.0], [1.0, 1.0], [0.0, 1.0]] },
            vec![0, 0],
        )
        .unwrap();
        let right = Cell::new(
            2,
            CellGeometry::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]] },
            vec![0, 0],
        )
        .unwrap();
        for t in [0.1, 0.37, 0.5, 0.9] {
            let inside = [&left, &right]
                .iter()
                .filter(|c| c.membership(&[t, t], 0.0) == Membership::Inside)
                .count();
            assert_eq!(inside, 1);
        }
    }

    #[test]
    fn degenerate_shapes_are_rejected() {
        assert!(Cell::new(1, CellGeometry::Interval { lo: 1.0, hi: 1.0 }, vec![0]).is_err());
        let flat = CellGeometry::Polygon { vertices: vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]] };
        assert!(Cell::new(1, flat, vec![0, 0]).is_err());
        let concave = CellGeometry::Polygon {
            vertices: vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.2], [1.0, 2.0]],
        };
        assert!(Cell::new(1, concave, vec![0, 0]).is_err());
        assert!(Cell::new(1, CellGeometry::Interval { lo: 0.0, hi: 1.0 }, vec![0, 0]).is_err());
    }

    #[test]
    fn json_layout() {
        let g = CellGeometry::Interval { lo: 0.0, hi: 0.5 };
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v, serde_json::json!({"kind": "interval", "geometry": {"lo": 0.0, "hi": 0.5}}));
    }
}
