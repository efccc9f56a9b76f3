use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::torus::{Cell, CellGeometry, Membership};
use crate::word::{Alphabet, LazyWord, Step, Symbol, Truncation, WordSource};

/// Default width of the band around cell boundaries.
pub const DEFAULT_BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Translation by `a` on `R^k / Z^k`, coordinates reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusTranslation {
    a: Vec<f64>,
}

impl TorusTranslation {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArguments("translation needs k >= 1".into()));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArguments("translation vector must be finite".into()));
        }
        let a = a
            .into_iter()
            .map(|x| {
                let r = x.rem_euclid(1.0);
                // rem_euclid can round up to exactly 1.0 for tiny negatives.
                if r >= 1.0 { 0.0 } else { r }
            })
            .collect();
        Ok(TorusTranslation { a })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn vector(&self) -> &[f64] {
        &self.a
    }
}

/// Why a point could not be assigned to a single cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryHit {
    /// Within the tolerance band of a cell boundary.
    Ambiguous,
    /// In no cell.
    Outside,
    /// Claimed by more than one cell.
    Overlap,
}

/// A fundamental domain of `R^k / Z^k` cut into cells, each moved by the
/// torus translation plus its own integer offset.
#[derive(Debug, Clone)]
pub struct PiecewiseTranslation {
    name: String,
    translation: TorusTranslation,
    cells: Vec<Cell>,
    /// Basis vectors (rows) embedding lattice coordinates into the drawing
    /// plane; identity unless a constructor says otherwise.
    lattice: Vec<Vec<f64>>,
    bounds: (Vec<f64>, Vec<f64>),
    tolerance: f64,
    steps: Vec<Vec<f64>>,
}

impl PiecewiseTranslation {
    pub fn new(name: impl Into<String>, translation: TorusTranslation, cells: Vec<Cell>) -> Result<Self> {
        let k = translation.dim();
        if cells.is_empty() {
            return Err(Error::InvalidArguments("a piecewise translation needs cells".into()));
        }
        if cells.len() > crate::word::MAX_ALPHABET {
            return Err(Error::InvalidArguments("too many cells".into()));
        }
        for (i, c) in cells.iter().enumerate() {
            if c.dim() != k {
                return Err(Error::InvalidArguments(format!(
                    "cell {} has dimension {}, translation has {k}",
                    c.id,
                    c.dim()
                )));
            }
            if c.id != i + 1 {
                return Err(Error::InvalidArguments(format!(
                    "cell ids must be 1..=m in order, found {} at position {}",
                    c.id,
                    i + 1
                )));
            }
        }
        // Union of cell boxes; the unit cube when some cell is unbounded.
        let bounds = cells
            .iter()
            .map(Cell::bounds)
            .try_fold(None::<(Vec<f64>, Vec<f64>)>, |acc, b| {
                let (lo, hi) = b?;
                Some(Some(match acc {
                    None => (lo, hi),
                    Some((l, h)) => (
                        l.iter().zip(&lo).map(|(a, b)| a.min(*b)).collect(),
                        h.iter().zip(&hi).map(|(a, b)| a.max(*b)).collect(),
                    ),
                }))
            })
            .flatten()
            .unwrap_or_else(|| (vec![0.0; k], vec![1.0; k]));
        let steps = step_vectors(&translation, &cells);
        let mut lattice = vec![vec![0.0; k]; k];
        for (i, row) in lattice.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Ok(PiecewiseTranslation {
            name: name.into(),
            translation,
            cells,
            lattice,
            bounds,
            tolerance: DEFAULT_BOUNDARY_TOLERANCE,
            steps,
        })
    }

    pub fn with_bounds(mut self, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != self.dim() || hi.len() != self.dim() || lo.iter().zip(&hi).any(|(l, h)| l >= h) {
            return Err(Error::InvalidArguments("bad bounding box".into()));
        }
        self.bounds = (lo, hi);
        Ok(self)
    }

    pub fn with_lattice(mut self, lattice: Vec<Vec<f64>>) -> Result<Self> {
        let k = self.dim();
        if lattice.len() != k || lattice.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidArguments("lattice basis must be k vectors of length k".into()));
        }
        self.lattice = lattice;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(Error::InvalidArguments("tolerance must be non-negative".into()));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn translation(&self) -> &TorusTranslation {
        &self.translation
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn piece_count(&self) -> usize {
        self.cells.len()
    }

    pub fn lattice(&self) -> &[Vec<f64>] {
        &self.lattice
    }

    pub fn bounds(&self) -> (&[f64], &[f64]) {
        (&self.bounds.0, &self.bounds.1)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Coding alphabet: one letter per cell, labelled by cell id.
    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.cells.len()).expect("cell count checked at construction")
    }

    /// `a + n_i` for each cell.
    pub fn steps(&self) -> &[Vec<f64>] {
        &self.steps
    }

    /// Index of the unique cell containing `x`, using the instance tolerance.
    pub fn locate(&self, x: &[f64]) -> std::result::Result<usize, BoundaryHit> {
        self.locate_with(x, self.tolerance)
    }

    pub fn locate_with(&self, x: &[f64], eps: f64) -> std::result::Result<usize, BoundaryHit> {
        let mut found = None;
        for (i, cell) in self.cells.iter().enumerate() {
            match cell.membership(x, eps) {
                Membership::Inside => {
                    if found.replace(i).is_some() {
                        return Err(BoundaryHit::Overlap);
                    }
                }
                Membership::Ambiguous => return Err(BoundaryHit::Ambiguous),
                Membership::Outside => {}
            }
        }
        found.ok_or(BoundaryHit::Outside)
    }

    /// One application of the map to a point known to lie in `cell`.
    pub fn apply_in(&self, x: &mut [f64], cell: usize) {
        for (xi, s) in x.iter_mut().zip(&self.steps[cell]) {
            *xi += s;
        }
    }

    /// `x_0, …, x_N` with `x_{j+1} = x_j + a + n(cell of x_j)`.
    ///
    /// Stops early, with a [`OrbitStatus::BoundaryHit`], at the first point
    /// that does not lie clearly inside exactly one cell.
    pub fn orbit(&self, x0: &[f64], steps: usize) -> Result<Orbit> {
        self.check_point(x0)?;
        let mut points = Vec::with_capacity(steps.min(1 << 20) + 1);
        let mut cells = Vec::with_capacity(steps.min(1 << 20) + 1);
        let mut x = x0.to_vec();
        for j in 0..=steps {
            match self.locate(&x) {
                Ok(c) => {
                    points.push(x.clone());
                    cells.push(c);
                    if j < steps {
                        self.apply_in(&mut x, c);
                    }
                }
                Err(hit) => {
                    return Ok(Orbit { points, cells, status: OrbitStatus::BoundaryHit { step: j, point: x, hit } });
                }
            }
        }
        Ok(Orbit { points, cells, status: OrbitStatus::Complete })
    }

    /// The coding of the orbit of `x0`: the sequence of visited cell ids.
    /// The stream ends with a truncation marker at the first boundary hit.
    pub fn coding(self: &Arc<Self>, x0: &[f64]) -> Result<LazyWord> {
        self.check_point(x0)?;
        Ok(LazyWord::new(Coding { map: Arc::clone(self), x0: x0.to_vec(), alphabet: self.alphabet() }))
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() || x.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArguments(format!(
                "expected a finite point with {} coordinates",
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn to_description(&self) -> DomainDescription {
        DomainDescription {
            name: self.name.clone(),
            k: self.dim(),
            a: self.translation.vector().to_vec(),
            cells: self
                .cells
                .iter()
                .map(|c| CellDescription {
                    id: c.id,
                    geometry: c.geometry.clone(),
                    offset: c.offset.clone(),
                    measure_hint: c.measure_hint,
                })
                .collect(),
            lattice: self.lattice.clone(),
            bounding_box: Some([self.bounds.0.clone(), self.bounds.1.clone()]),
            tolerance: Some(self.tolerance),
        }
    }

    pub fn from_description(desc: &DomainDescription) -> Result<Self> {
        if desc.a.len() != desc.k {
            return Err(Error::Format(format!("k = {} but a has {} coordinates", desc.k, desc.a.len())));
        }
        let cells = desc
            .cells
            .iter()
            .map(|c| {
                let cell = Cell::new(c.id, c.geometry.clone(), c.offset.clone())?;
                Ok(match c.measure_hint {
                    Some(m) => cell.with_measure_hint(m),
                    None => cell,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let translation = TorusTranslation::new(desc.a.clone())?;
        let mut pt = PiecewiseTranslation::new(desc.name.clone(), translation, cells)?;
        if let Some([lo, hi]) = &desc.bounding_box {
            pt = pt.with_bounds(lo.clone(), hi.clone())?;
        }
        let pt = pt.with_lattice(desc.lattice.clone())?;
        match desc.tolerance {
            Some(t) => pt.with_tolerance(t),
            None => Ok(pt),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_description())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        PiecewiseTranslation::from_description(&serde_json::from_str(text)?)
    }
}

fn step_vectors(translation: &TorusTranslation, cells: &[Cell]) -> Vec<Vec<f64>> {
    cells
        .iter()
        .map(|c| translation.vector().iter().zip(&c.offset).map(|(a, n)| a + *n as f64).collect())
        .collect()
}

/// JSON form of a piecewise translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainDescription {
    #[serde(default)]
    pub name: String,
    pub k: usize,
    pub a: Vec<f64>,
    pub cells: Vec<CellDescription>,
    pub lattice: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounding_box: Option<[Vec<f64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDescription {
    pub id: usize,
    #[serde(flatten)]
    pub geometry: CellGeometry,
    pub offset: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure_hint: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitStatus {
    Complete,
    BoundaryHit { step: usize, point: Vec<f64>, hit: BoundaryHit },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<Vec<f64>>,
    /// Zero-based cell index of each point.
    pub cells: Vec<usize>,
    pub status: OrbitStatus,
}

impl Orbit {
    /// CSV with header `step,x1,…,xk,cell`; cells are written by id.
    pub fn to_csv(&self) -> String {
        let k = self.points.first().map_or(0, Vec::len);
        let mut out = String::from("step,");
        for i in 1..=k {
            write!(out, "x{i},").unwrap();
        }
        out.push_str("cell\n");
        for (j, (p, c)) in self.points.iter().zip(&self.cells).enumerate() {
            write!(out, "{j},").unwrap();
            for x in p {
                write!(out, "{x},").unwrap();
            }
            writeln!(out, "{}", c + 1).unwrap();
        }
        out
    }
}

struct Coding {
    map: Arc<PiecewiseTranslation>,
    x0: Vec<f64>,
    alphabet: Alphabet,
}

impl WordSource for Coding {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn traverse(&self) -> Box<dyn Iterator<Item = Step> + Send> {
        Box::new(CodingIter { map: Arc::clone(&self.map), x: self.x0.clone(), position: 0, done: false })
    }

    fn describe(&self) -> String {
        format!("coding of {} from {:?}", self.map.name, self.x0)
    }
}

struct CodingIter {
    map: Arc<PiecewiseTranslation>,
    x: Vec<f64>,
    position: usize,
    done: bool,
}

impl Iterator for CodingIter {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        if self.done {
            return None;
        }
        match self.map.locate(&self.x) {
            Ok(c) => {
                self.map.apply_in(&mut self.x, c);
                self.position += 1;
                Some(Ok(Symbol(c as u8)))
            }
            Err(hit) => {
                self.done = true;
                Some(Err(Truncation {
                    position: self.position,
                    reason: format!("boundary {hit:?} at {:?}", self.x),
                }))
            }
        }
    }
}
