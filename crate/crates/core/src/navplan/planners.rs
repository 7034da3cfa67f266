use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Quaternion, Vector3};

use super::{NavError, Path, PathMetric, PathPlan, ProjectivePoint, SpaceKind, CHECKPOINT_TOLERANCE};
use crate::measures::{product_measure_with, FiniteMeasure, Metric};

/// Below this separation two inputs count as the same point.
const COINCIDENCE: f64 = 1e-12;

/// `s(x, y) = (β/π) δ_α + (α/π) δ_β`, where `α ∈ [0, π/2]` is the angle
/// between the lines and `β = π - α`; `δ_α` and `δ_β` rotate `x` onto `y`
/// in opposite directions within the plane they span.
pub fn rpn_navigate(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<PathPlan, NavError> {
    let (xv, yv) = (x.representative(), y.representative());
    if xv.len() != yv.len() {
        return Err(NavError::DimensionMismatch(xv.len(), yv.len()));
    }
    if xv.len() < 2 {
        return Err(NavError::OutOfRange("RP^n needs n >= 1".into()));
    }
    let checkpoints = vec![xv.clone(), yv.clone()];
    let c = xv.dot(yv);
    let y1 = if c < 0.0 { -yv } else { yv.clone() };
    let c = c.abs();
    let mut perp = &y1 - xv * c;
    perp -= xv * xv.dot(&perp);
    let s = perp.norm();
    if s <= COINCIDENCE {
        return PathPlan::new(SpaceKind::Projective, vec![(Path::Constant(xv.clone()), 1.0)], checkpoints);
    }
    let w = perp / s;
    let alpha = s.atan2(c);
    let beta = PI - alpha;
    let weight_alpha = beta / PI;
    let delta_alpha = Path::Rotation { start: xv.clone(), direction: w.clone(), angle: alpha };
    let delta_beta = Path::Rotation { start: xv.clone(), direction: -w, angle: beta };
    PathPlan::new(SpaceKind::Projective, vec![(delta_alpha, weight_alpha), (delta_beta, 1.0 - weight_alpha)], checkpoints)
}

fn check_unit(v: &DVector<f64>, dim: usize, tol: f64) -> Result<(), NavError> {
    if v.len() != dim {
        return Err(NavError::DimensionMismatch(v.len(), dim));
    }
    let n = v.norm();
    if (n - 1.0).abs() > tol {
        return Err(NavError::NotUnit(n));
    }
    Ok(())
}

/// Two arcs from `p` to `q`: the short one (angle `θ' ∈ [0, π]`) with weight
/// `1 - θ'/2π` and the long one with weight `θ'/2π`.
fn circle_pair(p: &DVector<f64>, q: &DVector<f64>) -> Vec<(Path, f64)> {
    if (p - q).norm() <= COINCIDENCE {
        return vec![(Path::Constant(p.clone()), 1.0)];
    }
    let dot = p.dot(q);
    let cross = p[0] * q[1] - p[1] * q[0];
    let theta = cross.abs().atan2(dot);
    let sign = if cross >= 0.0 { 1.0 } else { -1.0 };
    let jp = DVector::from_vec(vec![-p[1], p[0]]) * sign;
    let short = Path::Rotation { start: p.clone(), direction: jp.clone(), angle: theta };
    let long = Path::Rotation { start: p.clone(), direction: -jp, angle: 2.0 * PI - theta };
    let w_long = theta / (2.0 * PI);
    vec![(short, 1.0 - w_long), (long, w_long)]
}

/// Sup of the piecewise path distances.
struct PieceListMetric(PathMetric);

impl Metric<Vec<Path>> for PieceListMetric {
    fn distance(&self, a: &Vec<Path>, b: &Vec<Path>) -> f64 {
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter().zip(b).map(|(x, y)| self.0.distance(x, y)).fold(0.0, f64::max)
    }
}

/// Sequential plan on `S^1 ⊂ R^2` through `points` at times `i/(r-1)`,
/// composed segment by segment from the two-arc plan; support at most
/// `2^(r-1)`.
pub fn circle_navigate(points: &[DVector<f64>]) -> Result<PathPlan, NavError> {
    if points.len() < 2 {
        return Err(NavError::OutOfRange(format!("need r >= 2 points, got {}", points.len())));
    }
    for p in points {
        check_unit(p, 2, CHECKPOINT_TOLERANCE)?;
    }
    let metric = PathMetric(SpaceKind::Euclidean);
    if points.len() == 2 {
        return PathPlan::new(SpaceKind::Euclidean, circle_pair(&points[0], &points[1]), points.to_vec());
    }
    let mut acc: FiniteMeasure<Vec<Path>> = FiniteMeasure::dirac(Vec::new());
    for seg in points.windows(2) {
        let pieces = FiniteMeasure::new(circle_pair(&seg[0], &seg[1]), &metric)?;
        acc = product_measure_with(
            &acc,
            &pieces,
            |prefix: &Vec<Path>, piece: &Path| {
                let mut v = prefix.clone();
                v.push(piece.clone());
                v
            },
            &PieceListMetric(metric),
        );
    }
    let atoms = acc.atoms().iter().map(|(pieces, w)| (Path::Concat(pieces.clone()), *w)).collect();
    PathPlan::new(SpaceKind::Euclidean, atoms, points.to_vec())
}

fn to_quaternion(v: &DVector<f64>) -> Quaternion<f64> {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

fn from_quaternion(q: &Quaternion<f64>) -> DVector<f64> {
    DVector::from_vec(vec![q.w, q.i, q.j, q.k])
}

/// Hamilton product of quaternions written `[w, x, y, z]`.
pub fn quaternion_mul(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    from_quaternion(&(to_quaternion(a) * to_quaternion(b)))
}

/// `h(q) = q i q̄ ∈ S^2`, constant along right translates by `cos t + i sin t`.
pub fn hopf_map(q: &DVector<f64>) -> Vector3<f64> {
    let q = to_quaternion(q);
    let v = q * Quaternion::new(0.0, 1.0, 0.0, 0.0) * q.conjugate();
    Vector3::new(v.i, v.j, v.k)
}

/// Largest `|h(γ(t)) - h(e_1)|` over the sampling grid of every atom.
pub fn hopf_fiber_deviation(plan: &PathPlan) -> f64 {
    let base = hopf_map(&plan.checkpoints[0]);
    plan.measure
        .atoms()
        .iter()
        .flat_map(|(p, _)| p.samples())
        .map(|x| (hopf_map(&x) - base).norm())
        .fold(0.0, f64::max)
}

/// Plan on a fiber of `S^3 -> S^2` through `e_1, ..., e_r`: write
/// `e_{i+1} = e_1 a_i` with `a_i` in the circle subgroup, plan on the circle
/// through `(1, a_1, ..., a_{r-1})`, and translate every path by `e_1`.
pub fn hopf_parametrized_navigate(points: &[DVector<f64>]) -> Result<PathPlan, NavError> {
    if points.len() < 2 {
        return Err(NavError::OutOfRange(format!("need r >= 2 points, got {}", points.len())));
    }
    for p in points {
        check_unit(p, 4, CHECKPOINT_TOLERANCE)?;
    }
    let base = hopf_map(&points[0]);
    let discrepancy = points.iter().map(|p| (hopf_map(p) - base).norm()).fold(0.0, f64::max);
    if discrepancy > CHECKPOINT_TOLERANCE {
        return Err(NavError::DifferentFibers(discrepancy));
    }
    let e1 = to_quaternion(&points[0]);
    let mut circle_points = vec![DVector::from_vec(vec![1.0, 0.0])];
    for p in &points[1..] {
        let a = e1.conjugate() * to_quaternion(p);
        let v = DVector::from_vec(vec![a.w, a.i]);
        let n = v.norm();
        if (n - 1.0).abs() > CHECKPOINT_TOLERANCE {
            return Err(NavError::DifferentFibers(discrepancy.max((n - 1.0).abs())));
        }
        circle_points.push(v / n);
    }
    let circle = circle_navigate(&circle_points)?;
    // (c, s) -> e_1 (c + s i), as a 4x2 matrix.
    let col_1 = from_quaternion(&e1);
    let col_i = from_quaternion(&(e1 * Quaternion::new(0.0, 1.0, 0.0, 0.0)));
    let lift = DMatrix::from_columns(&[col_1, col_i]);
    let atoms = circle.measure.atoms().iter().map(|(p, w)| (p.transformed(&lift), *w)).collect();
    PathPlan::new(SpaceKind::Euclidean, atoms, points.to_vec())
}
