//! Distributed navigation algorithms on projective spaces, the circle and
//! the Hopf fibration, as finitely supported measures on closed-form paths.

mod planners;
mod verify;

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};
use thiserror::Error;

use crate::measures::{FiniteMeasure, MeasureError, Metric};

pub use planners::{
    circle_navigate, hopf_fiber_deviation, hopf_map, hopf_parametrized_navigate, quaternion_mul, rpn_navigate,
};
pub use verify::{
    check_equivariance, check_lp_continuity, embed_rotation, perturb_projective, random_hopf_fiber, random_so,
    random_unit_vector, Failure, VerifierReport,
};

/// Unit-norm tolerance for representatives and inputs.
pub const UNIT_TOLERANCE: f64 = 1e-12;
/// Tolerance for checkpoint and fiber conditions.
pub const CHECKPOINT_TOLERANCE: f64 = 1e-9;
/// Number of evenly spaced times used to compare paths.
pub const PATH_GRID: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NavError {
    #[error("vector has norm {0}, expected a unit vector")]
    NotUnit(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is not orthogonal (deviation {0:e})")]
    NotOrthogonal(f64),
    #[error("matrix has determinant {0}, expected 1")]
    NotSpecialOrthogonal(f64),
    #[error("matrix does not fix the last coordinate axis")]
    NotBlockEmbedded,
    #[error("points lie in different Hopf fibers (max projection discrepancy {0:e})")]
    DifferentFibers(f64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A line through the origin, stored by its unit representative whose first
/// coordinate above `UNIT_TOLERANCE` in magnitude is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    rep: DVector<f64>,
}

impl ProjectivePoint {
    /// Requires a unit vector; `v` and `-v` give the same point.
    pub fn new(v: DVector<f64>) -> Result<Self, NavError> {
        let norm = v.norm();
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(NavError::NotUnit(norm));
        }
        Ok(Self { rep: canonical_sign(v) })
    }

    /// Normalizes a nonzero vector first.
    pub fn from_vector(v: DVector<f64>) -> Result<Self, NavError> {
        let norm = v.norm();
        if norm <= UNIT_TOLERANCE || !norm.is_finite() {
            return Err(NavError::NotUnit(norm));
        }
        Ok(Self { rep: canonical_sign(v / norm) })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self, NavError> {
        Self::new(DVector::from_column_slice(v))
    }

    pub fn representative(&self) -> &DVector<f64> {
        &self.rep
    }

    /// `n` for a point of `RP^n`.
    pub fn dimension(&self) -> usize {
        self.rep.len() - 1
    }

    pub fn transform(&self, g: &DMatrix<f64>) -> Result<Self, NavError> {
        Self::from_vector(g * &self.rep)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        projective_distance(&self.rep, &other.rep)
    }
}

fn canonical_sign(v: DVector<f64>) -> DVector<f64> {
    match v.iter().find(|c| c.abs() > UNIT_TOLERANCE) {
        Some(&c) if c < 0.0 => -v,
        _ => v,
    }
}

/// Chordal distance between lines: `min(|u - v|, |u + v|)`.
pub fn projective_distance(u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (u - v).norm().min((u + v).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// Points are lines; representatives `v` and `-v` agree.
    Projective,
    /// Points are vectors compared in the ambient Euclidean norm.
    Euclidean,
}

impl SpaceKind {
    pub fn distance(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        match self {
            SpaceKind::Projective => projective_distance(u, v),
            SpaceKind::Euclidean => (u - v).norm(),
        }
    }
}

/// A closed-form path `[0, 1] -> R^N`.
#[derive(Clone, Debug, PartialEq)]
pub enum Path {
    Constant(DVector<f64>),
    /// `cos(tθ) start + sin(tθ) direction` with `direction ⟂ start`.
    Rotation { start: DVector<f64>, direction: DVector<f64>, angle: f64 },
    /// `(1 - t) from + t to`.
    Segment { from: DVector<f64>, to: DVector<f64> },
    /// Pieces traversed one after another on equal time slots.
    Concat(Vec<Path>),
    /// A linear map applied pointwise.
    Linear { matrix: DMatrix<f64>, inner: Box<Path> },
    /// `inner((t (r - j) + j - 1) / (r - 1))`.
    Suffix { inner: Box<Path>, j: u32, r: u32 },
}

impl Path {
    pub fn eval(&self, t: f64) -> DVector<f64> {
        match self {
            Path::Constant(p) => p.clone(),
            Path::Rotation { start, direction, angle } => {
                let (s, c) = (t * angle).sin_cos();
                start * c + direction * s
            }
            Path::Segment { from, to } => from * (1.0 - t) + to * t,
            Path::Concat(pieces) => {
                let k = pieces.len();
                let scaled = t * k as f64;
                let idx = (scaled.floor() as usize).min(k - 1);
                pieces[idx].eval(scaled - idx as f64)
            }
            Path::Linear { matrix, inner } => matrix * inner.eval(t),
            Path::Suffix { inner, j, r } => {
                let s = (t * (r - j) as f64 + (j - 1) as f64) / (r - 1) as f64;
                inner.eval(s)
            }
        }
    }

    pub fn start(&self) -> DVector<f64> {
        self.eval(0.0)
    }

    pub fn end(&self) -> DVector<f64> {
        self.eval(1.0)
    }

    pub fn transformed(&self, g: &DMatrix<f64>) -> Path {
        Path::Linear { matrix: g.clone(), inner: Box::new(self.clone()) }
    }

    /// Samples at `PATH_GRID` evenly spaced times including both ends.
    pub fn samples(&self) -> Vec<DVector<f64>> {
        (0..PATH_GRID).map(|k| self.eval(k as f64 / (PATH_GRID - 1) as f64)).collect()
    }

    pub fn to_json(&self) -> Value {
        let v = |x: &DVector<f64>| json!(x.as_slice());
        match self {
            Path::Constant(p) => json!({ "kind": "constant", "point": v(p) }),
            Path::Rotation { start, direction, angle } => {
                json!({ "kind": "rotation", "start": v(start), "direction": v(direction), "angle": angle })
            }
            Path::Segment { from, to } => json!({ "kind": "segment", "from": v(from), "to": v(to) }),
            Path::Concat(pieces) => json!({ "kind": "concat", "pieces": pieces.iter().map(Path::to_json).collect::<Vec<_>>() }),
            Path::Linear { matrix, inner } => {
                let rows: Vec<Vec<f64>> = matrix.row_iter().map(|r| r.iter().copied().collect()).collect();
                json!({ "kind": "linear", "matrix": rows, "inner": inner.to_json() })
            }
            Path::Suffix { inner, j, r } => json!({ "kind": "suffix", "j": j, "r": r, "inner": inner.to_json() }),
        }
    }
}

/// `φ_j(t) = φ((t (r - j) + j - 1) / (r - 1))`: starts at `φ((j-1)/(r-1))`
/// and ends at `φ(1)`.
pub fn reparametrize_suffix(path: &Path, j: u32, r: u32) -> Result<Path, NavError> {
    if r < 2 || j < 1 || j > r {
        return Err(NavError::OutOfRange(format!("need 1 <= j <= r and r >= 2, got j = {j}, r = {r}")));
    }
    Ok(Path::Suffix { inner: Box::new(path.clone()), j, r })
}

/// `(φ_1(s), ..., φ_r(s))`: the deformation from `(φ(0), φ(1/(r-1)), ..., φ(1))`
/// at `s = 0` to the diagonal point `(φ(1), ..., φ(1))` at `s = 1`.
pub fn diagonal_deformation(path: &Path, r: u32, s: f64) -> Result<Vec<DVector<f64>>, NavError> {
    (1..=r).map(|j| Ok(reparametrize_suffix(path, j, r)?.eval(s))).collect()
}

/// Sup distance over the sampling grid.
#[derive(Clone, Copy, Debug)]
pub struct PathMetric(pub SpaceKind);

impl Metric<Path> for PathMetric {
    fn distance(&self, a: &Path, b: &Path) -> f64 {
        (0..PATH_GRID)
            .map(|k| {
                let t = k as f64 / (PATH_GRID - 1) as f64;
                self.0.distance(&a.eval(t), &b.eval(t))
            })
            .fold(0.0, f64::max)
    }
}

/// A distributed navigation instruction: a probability measure on paths
/// that all pass through `checkpoints[i]` at time `i / (r - 1)`.
#[derive(Clone, Debug)]
pub struct PathPlan {
    pub space: SpaceKind,
    pub measure: FiniteMeasure<Path>,
    pub checkpoints: Vec<DVector<f64>>,
}

impl PathPlan {
    pub fn new(space: SpaceKind, atoms: Vec<(Path, f64)>, checkpoints: Vec<DVector<f64>>) -> Result<Self, NavError> {
        if checkpoints.len() < 2 {
            return Err(NavError::OutOfRange("a plan needs at least two checkpoints".into()));
        }
        let measure = FiniteMeasure::new(atoms, &PathMetric(space))?;
        Ok(Self { space, measure, checkpoints })
    }

    pub fn metric(&self) -> PathMetric {
        PathMetric(self.space)
    }

    pub fn support_size(&self) -> usize {
        self.measure.support_size()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.measure.atoms().iter().map(|(_, w)| *w).collect()
    }

    pub fn checkpoint_times(&self) -> Vec<f64> {
        let r = self.checkpoints.len();
        (0..r).map(|i| i as f64 / (r - 1) as f64).collect()
    }

    /// Largest distance between an atom at a checkpoint time and the
    /// prescribed point.
    pub fn max_checkpoint_error(&self) -> f64 {
        let times = self.checkpoint_times();
        let mut worst: f64 = 0.0;
        for (path, _) in self.measure.atoms() {
            for (t, c) in times.iter().zip(&self.checkpoints) {
                worst = worst.max(self.space.distance(&path.eval(*t), c));
            }
        }
        worst
    }

    pub fn mass_error(&self) -> f64 {
        (self.measure.total_mass() - 1.0).abs()
    }

    /// The plan with every path pushed through the linear map `g`.
    pub fn transformed(&self, g: &DMatrix<f64>) -> Result<Self, NavError> {
        let atoms = self.measure.atoms().iter().map(|(p, w)| (p.transformed(g), *w)).collect();
        let checkpoints = self.checkpoints.iter().map(|c| g * c).collect();
        Self::new(self.space, atoms, checkpoints)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "space": match self.space { SpaceKind::Projective => "projective", SpaceKind::Euclidean => "euclidean" },
            "checkpoints": self.checkpoints.iter().map(|c| json!(c.as_slice())).collect::<Vec<_>>(),
            "atoms": self.measure.to_json(Path::to_json),
        })
    }
}
