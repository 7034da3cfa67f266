//! Finitely supported probability measures on metric spaces and the
//! Lévy–Prokhorov distance between them.

use std::fmt::Debug;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::rational::{self, Rational};

/// Largest support `lp_distance` will enumerate subsets of.
pub const MAX_LP_SUPPORT: usize = 12;
/// Points closer than this are merged into one atom.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Tolerance on the total mass of floating-point measures.
pub const MASS_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_LP_PRECISION: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("support of size {0} exceeds the limit of {MAX_LP_SUPPORT} atoms")]
    Capacity(usize),
    #[error("weight {0} is negative or not finite")]
    BadWeight(String),
    #[error("weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("empty measure")]
    Empty,
}

pub trait Metric<P: ?Sized> {
    fn distance(&self, a: &P, b: &P) -> f64;
}

/// Wraps a closure as a metric.
pub struct FnMetric<F>(pub F);

impl<P: ?Sized, F: Fn(&P, &P) -> f64> Metric<P> for FnMetric<F> {
    fn distance(&self, a: &P, b: &P) -> f64 {
        (self.0)(a, b)
    }
}

/// Euclidean distance on coordinate vectors.
pub struct Euclidean;

impl Metric<[f64]> for Euclidean {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

impl Metric<Vec<f64>> for Euclidean {
    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        Metric::<[f64]>::distance(self, a, b)
    }
}

impl Metric<f64> for Euclidean {
    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }
}

/// Max of the component distances on a product.
pub struct ProductMetric<A, B>(pub A, pub B);

impl<P, Q, A: Metric<P>, B: Metric<Q>> Metric<(P, Q)> for ProductMetric<A, B> {
    fn distance(&self, a: &(P, Q), b: &(P, Q)) -> f64 {
        self.0.distance(&a.0, &b.0).max(self.1.distance(&a.1, &b.1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Float,
    Exact,
}

/// Arithmetic a measure's weights need.
pub trait Weight: Clone + Debug + PartialEq {
    const MODE: WeightMode;
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn is_positive(&self) -> bool;
    fn is_zero(&self) -> bool;
    /// Whether a total mass counts as 1.
    fn is_unit_mass(&self) -> bool;
    fn to_json(&self) -> Value;
}

impl Weight for f64 {
    const MODE: WeightMode = WeightMode::Float;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_positive(&self) -> bool {
        self.is_finite() && *self > 0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_unit_mass(&self) -> bool {
        (self - 1.0).abs() <= MASS_TOLERANCE
    }
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl Weight for Rational {
    const MODE: WeightMode = WeightMode::Exact;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit_mass(&self) -> bool {
        One::is_one(self)
    }
    fn to_json(&self) -> Value {
        json!(rational::to_string(self))
    }
}

/// `sum a_i x_i` with positive weights summing to 1. Atom order carries no
/// meaning.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMeasure<P, W = f64> {
    atoms: Vec<(P, W)>,
}

impl<P: Clone, W: Weight> FiniteMeasure<P, W> {
    /// Drops zero weights, merges atoms within `MERGE_TOLERANCE` and checks
    /// normalization.
    pub fn new<M: Metric<P> + ?Sized>(atoms: Vec<(P, W)>, metric: &M) -> Result<Self, MeasureError> {
        let mut merged: Vec<(P, W)> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            if w.is_zero() {
                continue;
            }
            if !w.is_positive() {
                return Err(MeasureError::BadWeight(format!("{w:?}")));
            }
            match merged.iter_mut().find(|(q, _)| metric.distance(q, &p) <= MERGE_TOLERANCE) {
                Some((_, acc)) => *acc = acc.add(&w),
                None => merged.push((p, w)),
            }
        }
        if merged.is_empty() {
            return Err(MeasureError::Empty);
        }
        let total = merged.iter().fold(W::zero(), |acc, (_, w)| acc.add(w));
        if !total.is_unit_mass() {
            return Err(MeasureError::NotNormalized(format!("{total:?}")));
        }
        Ok(Self { atoms: merged })
    }

    pub fn dirac(p: P) -> Self {
        Self { atoms: vec![(p, W::one())] }
    }

    pub fn atoms(&self) -> &[(P, W)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn mode(&self) -> WeightMode {
        W::MODE
    }

    pub fn total_mass(&self) -> W {
        self.atoms.iter().fold(W::zero(), |acc, (_, w)| acc.add(w))
    }

    /// Serializes as `[{point, weight}]` with a caller-supplied point encoding.
    pub fn to_json(&self, encode: impl Fn(&P) -> Value) -> Value {
        Value::Array(self.atoms.iter().map(|(p, w)| json!({ "point": encode(p), "weight": w.to_json() })).collect())
    }
}

/// Image measure under `f`; colliding images are merged with summed weights.
pub fn pushforward<P, Q, W, M>(f: impl Fn(&P) -> Q, mu: &FiniteMeasure<P, W>, metric: &M) -> FiniteMeasure<Q, W>
where
    P: Clone,
    Q: Clone,
    W: Weight,
    M: Metric<Q> + ?Sized,
{
    let mut merged: Vec<(Q, W)> = Vec::with_capacity(mu.atoms.len());
    for (p, w) in &mu.atoms {
        let q = f(p);
        match merged.iter_mut().find(|(x, _)| metric.distance(x, &q) <= MERGE_TOLERANCE) {
            Some((_, acc)) => *acc = acc.add(w),
            None => merged.push((q, w.clone())),
        }
    }
    FiniteMeasure { atoms: merged }
}

/// `(sum a_i x_i, sum b_j y_j) -> sum a_i b_j (x_i, y_j)`.
pub fn product_measure<P: Clone, Q: Clone, W: Weight>(
    mu: &FiniteMeasure<P, W>,
    nu: &FiniteMeasure<Q, W>,
) -> FiniteMeasure<(P, Q), W> {
    let atoms = mu
        .atoms
        .iter()
        .flat_map(|(p, a)| nu.atoms.iter().map(move |(q, b)| ((p.clone(), q.clone()), a.mul(b))))
        .collect();
    FiniteMeasure { atoms }
}

/// `sum a_i b_j [x_i, y_j]` for a combining map `[-, -]`, merging atoms whose
/// combinations coincide.
pub fn product_measure_with<P, Q, R, W, M>(
    mu: &FiniteMeasure<P, W>,
    nu: &FiniteMeasure<Q, W>,
    combine: impl Fn(&P, &Q) -> R,
    metric: &M,
) -> FiniteMeasure<R, W>
where
    P: Clone,
    Q: Clone,
    R: Clone,
    W: Weight,
    M: Metric<R> + ?Sized,
{
    pushforward(|(p, q): &(P, Q)| combine(p, q), &product_measure(mu, nu), metric)
}

/// Whether `ε` satisfies both Lévy–Prokhorov inequalities on every subset of
/// the supports. `dist[i][j]` is the distance from atom `i` of `mu` to atom
/// `j` of `nu`.
fn lp_condition(mu: &[f64], nu: &[f64], dist: &[Vec<f64>], eps: f64) -> bool {
    let one_side = |a: &[f64], b: &[f64], d: &dyn Fn(usize, usize) -> f64| {
        // near[j] = atoms of `a` within ε of atom j of `b`.
        let near: Vec<u32> = (0..b.len())
            .map(|j| (0..a.len()).filter(|&i| d(i, j) < eps).fold(0u32, |m, i| m | (1 << i)))
            .collect();
        for set in 1u32..(1 << a.len()) {
            let ma: f64 = (0..a.len()).filter(|i| set & (1 << i) != 0).map(|i| a[i]).sum();
            let nb: f64 = (0..b.len()).filter(|&j| near[j] & set != 0).map(|j| b[j]).sum();
            if ma > nb + eps {
                return false;
            }
        }
        true
    };
    one_side(mu, nu, &|i, j| dist[i][j]) && one_side(nu, mu, &|j, i| dist[i][j])
}

/// Lévy–Prokhorov distance to absolute precision `DEFAULT_LP_PRECISION`.
pub fn lp_distance<P, W, M>(mu: &FiniteMeasure<P, W>, nu: &FiniteMeasure<P, W>, metric: &M) -> Result<f64, MeasureError>
where
    P: Clone,
    W: Weight,
    M: Metric<P> + ?Sized,
{
    lp_distance_with_precision(mu, nu, metric, DEFAULT_LP_PRECISION)
}

/// `inf{ε : μ(A) <= ν(A^ε) + ε and ν(A) <= μ(A^ε) + ε}` by bisection on
/// `[0, 1]`, with `A` ranging over subsets of the supports and `A^ε` the open
/// ε-neighbourhood.
pub fn lp_distance_with_precision<P, W, M>(
    mu: &FiniteMeasure<P, W>,
    nu: &FiniteMeasure<P, W>,
    metric: &M,
    precision: f64,
) -> Result<f64, MeasureError>
where
    P: Clone,
    W: Weight,
    M: Metric<P> + ?Sized,
{
    for m in [mu.support_size(), nu.support_size()] {
        if m > MAX_LP_SUPPORT {
            return Err(MeasureError::Capacity(m));
        }
    }
    let a: Vec<f64> = mu.atoms.iter().map(|(_, w)| w.to_f64()).collect();
    let b: Vec<f64> = nu.atoms.iter().map(|(_, w)| w.to_f64()).collect();
    let dist: Vec<Vec<f64>> =
        mu.atoms.iter().map(|(p, _)| nu.atoms.iter().map(|(q, _)| metric.distance(p, q)).collect()).collect();
    // Mass comparisons carry rounding of order 1e-15; ε = 0 can only hold
    // for identical measures, which the first positive probe detects.
    let tiny = precision.min(1e-15);
    if lp_condition(&a, &b, &dist, tiny) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > precision {
        let mid = 0.5 * (lo + hi);
        if lp_condition(&a, &b, &dist, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
