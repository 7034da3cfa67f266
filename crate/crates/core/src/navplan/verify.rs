use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{NavError, PathPlan, ProjectivePoint};
use crate::measures::lp_distance_with_precision;

/// Bisection precision for comparing plans that should coincide.
const EQUIVARIANCE_LP_PRECISION: f64 = 1e-13;
const MATRIX_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub input: Value,
    pub value: f64,
}

/// Summary of a numerical verifier run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifierReport {
    pub samples: usize,
    pub max_discrepancy: f64,
    pub failures: Vec<Failure>,
}

impl VerifierReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn merge(mut self, other: Self) -> Self {
        self.samples += other.samples;
        self.max_discrepancy = self.max_discrepancy.max(other.max_discrepancy);
        self.failures.extend(other.failures);
        self
    }
}

fn matrix_json(m: &DMatrix<f64>) -> Value {
    json!(m.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Checks that `g` is special orthogonal of the block form `[[A, 0], [0, 1]]`.
fn check_group_element(g: &DMatrix<f64>) -> Result<(), NavError> {
    if !g.is_square() {
        return Err(NavError::DimensionMismatch(g.nrows(), g.ncols()));
    }
    let n = g.nrows();
    let dev = (g.transpose() * g - DMatrix::<f64>::identity(n, n)).amax();
    if dev > MATRIX_TOLERANCE {
        return Err(NavError::NotOrthogonal(dev));
    }
    let det = g.determinant();
    if (det - 1.0).abs() > MATRIX_TOLERANCE {
        return Err(NavError::NotSpecialOrthogonal(det));
    }
    for k in 0..n {
        let want = if k == n - 1 { 1.0 } else { 0.0 };
        if (g[(n - 1, k)] - want).abs() > MATRIX_TOLERANCE || (g[(k, n - 1)] - want).abs() > MATRIX_TOLERANCE {
            return Err(NavError::NotBlockEmbedded);
        }
    }
    Ok(())
}

/// Compares `plan(g x, g y)` with `g · plan(x, y)` as unordered measures on
/// paths, for every group element and input pair.
pub fn check_equivariance<F>(
    plan_fn: F,
    group_elements: &[DMatrix<f64>],
    sample_pairs: &[(ProjectivePoint, ProjectivePoint)],
    tol: f64,
) -> Result<VerifierReport, NavError>
where
    F: Fn(&ProjectivePoint, &ProjectivePoint) -> Result<PathPlan, NavError> + Sync,
{
    for g in group_elements {
        check_group_element(g)?;
    }
    let cases: Vec<(&DMatrix<f64>, &(ProjectivePoint, ProjectivePoint))> =
        group_elements.iter().flat_map(|g| sample_pairs.iter().map(move |p| (g, p))).collect();
    let reports = cases
        .par_iter()
        .map(|(g, (x, y))| -> Result<VerifierReport, NavError> {
            let moved = plan_fn(&x.transform(g)?, &y.transform(g)?)?;
            let carried = plan_fn(x, y)?.transformed(g)?;
            let d = lp_distance_with_precision(&moved.measure, &carried.measure, &moved.metric(), EQUIVARIANCE_LP_PRECISION)?;
            let mut r = VerifierReport { samples: 1, max_discrepancy: d, failures: Vec::new() };
            if d > tol {
                r.failures.push(Failure {
                    input: json!({
                        "g": matrix_json(g),
                        "x": x.representative().as_slice(),
                        "y": y.representative().as_slice(),
                    }),
                    value: d,
                });
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reports.into_iter().fold(VerifierReport::default(), VerifierReport::merge))
}

/// Perturbs every base input `samples` times with `perturb` (which returns
/// the perturbed input and its distance from the original) and records the
/// Lévy–Prokhorov distance between the resulting plans. A sample fails when
/// that distance exceeds `ceiling` times the input distance.
#[allow(clippy::too_many_arguments)]
pub fn check_lp_continuity<I, F, P, R>(
    plan_fn: F,
    base_points: &[I],
    perturb: P,
    perturbation_scale: f64,
    samples: usize,
    ceiling: f64,
    encode: impl Fn(&I) -> Value,
    rng: &mut R,
) -> Result<VerifierReport, NavError>
where
    F: Fn(&I) -> Result<PathPlan, NavError>,
    P: Fn(&I, f64, &mut R) -> (I, f64),
    R: Rng,
{
    let mut report = VerifierReport::default();
    for base in base_points {
        let plan = plan_fn(base)?;
        for _ in 0..samples {
            let (moved, dist) = perturb(base, perturbation_scale, rng);
            let other = plan_fn(&moved)?;
            let lp = lp_distance_with_precision(&plan.measure, &other.measure, &plan.metric(), 1e-9)?;
            report.samples += 1;
            report.max_discrepancy = report.max_discrepancy.max(lp);
            let ratio = if dist > 0.0 { lp / dist } else if lp > 0.0 { f64::INFINITY } else { 0.0 };
            if ratio > ceiling {
                report.failures.push(Failure {
                    input: json!({ "base": encode(base), "perturbed": encode(&moved), "input_distance": dist }),
                    value: ratio,
                });
            }
        }
    }
    Ok(report)
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Haar-random element of `SO(n)` from the QR decomposition of a Gaussian
/// matrix.
pub fn random_so<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// `A -> [[A, 0], [0, 1]]`.
pub fn embed_rotation(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut g = DMatrix::<f64>::identity(n + 1, n + 1);
    g.view_mut((0, 0), (n, n)).copy_from(a);
    g
}

/// Moves a projective point by an angle in `(0, scale]` in a random
/// direction; returns the new point and its chordal distance.
pub fn perturb_projective<R: Rng + ?Sized>(p: &ProjectivePoint, scale: f64, rng: &mut R) -> (ProjectivePoint, f64) {
    let x = p.representative();
    let mut v = random_unit_vector(x.len(), rng);
    v -= x * x.dot(&v);
    let v = v.normalize();
    let angle = scale * rng.gen_range(f64::EPSILON..=1.0);
    let moved = ProjectivePoint::from_vector(x * angle.cos() + v * angle.sin()).expect("nonzero vector");
    let d = p.distance(&moved);
    (moved, d)
}

/// `r` random points on one fiber of the Hopf map.
pub fn random_hopf_fiber<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Vec<DVector<f64>> {
    use std::f64::consts::PI;
    let e1 = random_unit_vector(4, rng);
    let mut out = vec![e1.clone()];
    for _ in 1..r {
        let t: f64 = rng.gen_range(-PI..PI);
        let a = DVector::from_vec(vec![t.cos(), t.sin(), 0.0, 0.0]);
        out.push(super::quaternion_mul(&e1, &a));
    }
    out
}
