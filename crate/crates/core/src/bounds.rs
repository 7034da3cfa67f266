//! Cohomological lower bounds for sequential parametrized topological
//! complexity: zero-divisors of diagonal maps, explicit nonzero products,
//! Euler class heights and a bounded cup-length search.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gcring::{ElementDegree, GradedElement, Monomial, RingError, RingPresentation};
use crate::presentations::{
    build_config_space, build_fn_fiber_product, build_sphere_bundle_tower, conf_id, fiber_id, tower_u_id,
    FadellNeuwirthSpec, PresentationError, SphereBundleTower, SphereBundleTowerSpec,
};
use crate::rational::{self, Rational};

/// Largest multiset size `cup_length_kernel` will explore.
pub const MAX_BUDGET: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("the product of the {factors} certificate factors vanishes; the presentation is suspect")]
    ProductVanishes { factors: usize },
    #[error("partition {got:?} must have {expected_len} non-negative entries summing to the height {expected_sum}")]
    PartitionMismatch { expected_len: usize, expected_sum: u32, got: Vec<u32> },
    #[error("`{0}` is not in the kernel of the diagonal")]
    NotInKernel(String),
    #[error("generator images do not define a ring map: {0}")]
    NotARingMap(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl BoundsError {
    /// True when the failure points at the model rather than at the caller's
    /// arguments.
    pub fn is_validation(&self) -> bool {
        match self {
            BoundsError::ProductVanishes { .. } | BoundsError::NotARingMap(_) => true,
            BoundsError::Presentation(e) => {
                matches!(e, PresentationError::NonConfluent(_) | PresentationError::PoincareMismatch { .. })
            }
            BoundsError::Ring(e) => matches!(e, RingError::NonConfluent(_)),
            _ => false,
        }
    }
}

/// The map induced in cohomology by a diagonal, given on generators.
#[derive(Clone, Debug)]
pub struct DiagonalMap {
    pub source: RingPresentation,
    pub target: RingPresentation,
    pub generator_images: BTreeMap<String, GradedElement>,
}

impl DiagonalMap {
    /// Checks that every generator has a homogeneous image of its own degree
    /// and that every relation of the source maps to zero.
    pub fn new(
        source: RingPresentation,
        target: RingPresentation,
        generator_images: BTreeMap<String, GradedElement>,
    ) -> Result<Self, BoundsError> {
        let mut images = BTreeMap::new();
        for g in source.generators() {
            let img = generator_images
                .get(&g.id)
                .ok_or_else(|| BoundsError::NotARingMap(format!("no image for `{}`", g.id)))?;
            let img = target.normal_form(img)?;
            match target.degree_of(&img) {
                ElementDegree::Zero => {}
                ElementDegree::Homogeneous(d) if d == g.degree => {}
                other => {
                    return Err(BoundsError::NotARingMap(format!(
                        "image of `{}` has degree {:?}, expected {}",
                        g.id, other, g.degree
                    )))
                }
            }
            images.insert(g.id.clone(), img);
        }
        if let Some(extra) = generator_images.keys().find(|k| !source.has_generator(k)) {
            return Err(BoundsError::NotARingMap(format!("`{extra}` is not a source generator")));
        }
        let map = Self { source, target, generator_images: images };
        for rule in map.source.rules() {
            let a = &map.generator_images[map.source.gen_id(rule.lhs.0)];
            let b = &map.generator_images[map.source.gen_id(rule.lhs.1)];
            let lhs = map.target.multiply(a, b)?;
            let rhs = map.apply(&rule.rhs)?;
            if lhs != rhs {
                return Err(BoundsError::NotARingMap(format!(
                    "relation {}*{} is not preserved",
                    map.source.gen_id(rule.lhs.0),
                    map.source.gen_id(rule.lhs.1)
                )));
            }
        }
        for g in map.source.generators() {
            if let Some(t) = g.truncation {
                if !map.target.pow(&map.generator_images[&g.id], t)?.is_zero() {
                    return Err(BoundsError::NotARingMap(format!("`{}`^{t} does not map to zero", g.id)));
                }
            }
        }
        Ok(map)
    }

    pub fn apply(&self, e: &GradedElement) -> Result<GradedElement, RingError> {
        let e = self.source.normal_form(e)?;
        let mut out = self.target.zero();
        for (m, c) in e.terms() {
            let factors: Vec<GradedElement> =
                self.source.monomial_ids(m).iter().map(|id| self.generator_images[id].clone()).collect();
            out = out.add(&self.target.product(&factors)?.scale(c))?;
        }
        Ok(out)
    }

    pub fn kills(&self, e: &GradedElement) -> Result<bool, RingError> {
        Ok(self.apply(e)?.is_zero())
    }
}

/// A product of kernel elements with nonzero normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct NonzeroCertificate {
    pub product_factors: Vec<GradedElement>,
    pub normal_form: GradedElement,
    pub witness_monomial: Monomial,
    pub coefficient: Rational,
    pub implied_lower_bound: u32,
    pub ref_tag: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateDoc {
    pub factors: Vec<String>,
    pub witness_monomial: Vec<String>,
    pub coefficient: String,
    pub bound: u32,
    pub ref_tag: String,
}

impl NonzeroCertificate {
    fn build(
        p: &RingPresentation,
        factors: Vec<GradedElement>,
        ref_tag: &str,
    ) -> Result<Self, BoundsError> {
        let normal_form = p.product(&factors)?;
        let (m, c) = normal_form
            .leading_term()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(BoundsError::ProductVanishes { factors: factors.len() })?;
        Ok(Self {
            implied_lower_bound: factors.len() as u32,
            product_factors: factors,
            normal_form,
            witness_monomial: m,
            coefficient: c,
            ref_tag: ref_tag.to_string(),
        })
    }

    /// Re-checks the certificate from scratch: every factor is killed by the
    /// diagonal, the product is nonzero, and the bound equals the factor count.
    pub fn verify(&self, diagonal: &DiagonalMap) -> Result<(), BoundsError> {
        let p = &diagonal.source;
        for f in &self.product_factors {
            if !diagonal.kills(f)? {
                return Err(BoundsError::NotInKernel(p.display(f)));
            }
        }
        let nf = p.product(&self.product_factors)?;
        if nf.is_zero() || nf != self.normal_form {
            return Err(BoundsError::ProductVanishes { factors: self.product_factors.len() });
        }
        if nf.coefficient(&self.witness_monomial) != self.coefficient || self.coefficient.is_zero() {
            return Err(BoundsError::ProductVanishes { factors: self.product_factors.len() });
        }
        if self.implied_lower_bound as usize != self.product_factors.len() {
            return Err(BoundsError::OutOfRange("bound differs from factor count".into()));
        }
        Ok(())
    }

    pub fn to_doc(&self, p: &RingPresentation) -> CertificateDoc {
        CertificateDoc {
            factors: self.product_factors.iter().map(|f| p.display(f)).collect(),
            witness_monomial: p.monomial_ids(&self.witness_monomial),
            coefficient: rational::to_string(&self.coefficient),
            bound: self.implied_lower_bound,
            ref_tag: self.ref_tag.clone(),
        }
    }

    pub fn to_json(&self, p: &RingPresentation) -> String {
        serde_json::to_string_pretty(&self.to_doc(p)).expect("certificate documents always serialize")
    }
}

/// `Δ_r^*` from the `r`-fold fiber product to `H*(F(R^d, m+n))`: every copy
/// `w^l_ij` goes to `w_ij`.
pub fn diagonal_fn(spec: &FadellNeuwirthSpec) -> Result<DiagonalMap, BoundsError> {
    let source = build_fn_fiber_product(spec)?;
    let target = build_config_space(spec.d, spec.m + spec.n)?;
    let mut images = BTreeMap::new();
    for j in 2..=spec.m + spec.n {
        for i in 1..j {
            let img = target.generator(&conf_id(i, j))?;
            for l in 1..=spec.r {
                images.insert(fiber_id(spec, l, i, j), img.clone());
            }
        }
    }
    DiagonalMap::new(source, target, images)
}

/// The difference `w^a_ij - w^b_ij`.
fn fiber_diff(p: &RingPresentation, spec: &FadellNeuwirthSpec, a: u32, b: u32, i: u32, j: u32) -> Result<GradedElement, RingError> {
    p.generator(&fiber_id(spec, a, i, j))?.sub(&p.generator(&fiber_id(spec, b, i, j))?)
}

/// The explicit zero-divisor product for the Fadell–Neuwirth fiber product,
/// checked factor by factor and evaluated to a nonzero normal form.
pub fn verify_witness_fn(spec: &FadellNeuwirthSpec) -> Result<NonzeroCertificate, BoundsError> {
    if spec.r < 2 {
        return Err(BoundsError::OutOfRange(format!("r = {} must be at least 2", spec.r)));
    }
    let diagonal = diagonal_fn(spec)?;
    let p = &diagonal.source;
    let FadellNeuwirthSpec { d, m, n, r } = *spec;
    let mut factors = Vec::new();
    for i in 2..=m {
        factors.push(fiber_diff(p, spec, 1, 2, i, m + 1)?);
    }
    let tag = if d % 2 == 1 {
        for j in m + 1..=m + n {
            let x = fiber_diff(p, spec, 2, 1, 1, j)?;
            factors.push(x.clone());
            factors.push(x);
        }
        for l in 3..=r {
            for j in m + 1..=m + n {
                factors.push(fiber_diff(p, spec, l, 1, 1, j)?);
            }
        }
        "witness:fn:odd"
    } else {
        for j in m + 2..=m + n {
            factors.push(fiber_diff(p, spec, 1, 2, j - 1, j)?);
        }
        for l in 2..=r {
            for j in m + 1..=m + n {
                factors.push(fiber_diff(p, spec, l, 1, 1, j)?);
            }
        }
        "witness:fn:even"
    };
    for f in &factors {
        if !diagonal.kills(f)? {
            return Err(BoundsError::NotInKernel(p.display(f)));
        }
    }
    NonzeroCertificate::build(p, factors, tag)
}

/// All differences `w^l_ij - w^k_ij` with `l < k` over the fiber pairs
/// `j > m`, in generator order.
pub fn fn_kernel_generators(spec: &FadellNeuwirthSpec, p: &RingPresentation) -> Result<Vec<GradedElement>, RingError> {
    let mut out = Vec::new();
    for j in spec.m + 1..=spec.m + spec.n {
        for i in 1..j {
            for l in 1..=spec.r {
                for k in l + 1..=spec.r {
                    out.push(fiber_diff(p, spec, l, k, i, j)?);
                }
            }
        }
    }
    Ok(out)
}

/// Largest `k <= max_h` with `e^k != 0`; zero for `e = 0`.
pub fn euler_height(p: &RingPresentation, e: &GradedElement, max_h: u32) -> Result<u32, RingError> {
    let e = p.normal_form(e)?;
    if e.is_zero() {
        return Ok(0);
    }
    let mut acc = e.clone();
    for k in 1..=max_h {
        if k > 1 {
            acc = p.multiply(&acc, &e)?;
        }
        if acc.is_zero() {
            return Ok(k - 1);
        }
    }
    Ok(max_h)
}

/// A safe search limit for `euler_height`: the degree ceiling divided by the
/// class degree, or `fallback` when the ring is unbounded.
pub fn height_limit(p: &RingPresentation, e: &GradedElement, fallback: u32) -> u32 {
    match (p.degree_ceiling(), p.degree_of(e)) {
        (Some(c), ElementDegree::Homogeneous(d)) if d > 0 => c / d + 1,
        _ => fallback,
    }
}

/// `Δ̇_r^*` from the tower over `B` to the single sphere bundle `Ė`: base
/// classes and `u` are fixed, each `u_i` goes to `e(ξ̈)`.
pub fn tower_diagonal(tower: &SphereBundleTower, spec: &SphereBundleTowerSpec) -> Result<DiagonalMap, BoundsError> {
    let single = build_sphere_bundle_tower(&spec.with_r(1))?;
    let target = single.presentation.clone();
    let mut images = BTreeMap::new();
    for g in spec.base.generators() {
        images.insert(g.id.clone(), target.generator(&g.id)?);
    }
    images.insert(tower_u_id(0), single.u.clone());
    for i in 1..tower.r {
        images.insert(tower_u_id(i), single.euler_xi_ddot.clone());
    }
    DiagonalMap::new(tower.presentation.clone(), target, images)
}

/// Height of `e(ξ̈)` in `H*(Ė)`.
pub fn tower_euler_height(spec: &SphereBundleTowerSpec) -> Result<u32, BoundsError> {
    let single = build_sphere_bundle_tower(&spec.with_r(1))?;
    let limit = height_limit(&single.presentation, &single.euler_xi_ddot, 64);
    Ok(euler_height(&single.presentation, &single.euler_xi_ddot, limit)?)
}

/// `[h, 0, ..., 0]` with `r - 1` entries.
pub fn default_partition(h: u32, r: u32) -> Vec<u32> {
    let mut b = vec![0; r.saturating_sub(1) as usize];
    if let Some(first) = b.first_mut() {
        *first = h;
    }
    b
}

/// Certificate `prod_i (u_i - e(η_i'))^{b_i + 1}` for the `r`-fold tower,
/// where `e(η_i') = 2u_i - e(ξ̈)` for odd `q` and vanishes for even `q`.
pub fn sphere_bundle_lower_bound(spec: &SphereBundleTowerSpec, b_partition: &[u32]) -> Result<NonzeroCertificate, BoundsError> {
    if spec.r < 2 {
        return Err(BoundsError::OutOfRange(format!("r = {} must be at least 2", spec.r)));
    }
    let h = tower_euler_height(spec)?;
    if b_partition.len() != (spec.r - 1) as usize || b_partition.iter().sum::<u32>() != h {
        return Err(BoundsError::PartitionMismatch {
            expected_len: (spec.r - 1) as usize,
            expected_sum: h,
            got: b_partition.to_vec(),
        });
    }
    let tower = build_sphere_bundle_tower(spec)?;
    let diagonal = tower_diagonal(&tower, spec)?;
    let p = &tower.presentation;
    let mut factors = Vec::new();
    for (ui, &b) in tower.u_i.iter().zip(b_partition) {
        let f = if spec.q_is_odd() { tower.euler_xi_ddot.sub(ui)? } else { ui.clone() };
        if !diagonal.kills(&f)? {
            return Err(BoundsError::NotInKernel(p.display(&f)));
        }
        for _ in 0..=b {
            factors.push(f.clone());
        }
    }
    NonzeroCertificate::build(p, factors, "witness:sphere-bundle")
}

/// Outcome of the bounded kernel cup-length search.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelCupLength {
    pub length: u32,
    /// Indices into the supplied generator list, in the order multiplied.
    pub indices: Vec<usize>,
    pub certificate: Option<NonzeroCertificate>,
}

struct Search<'a> {
    p: &'a RingPresentation,
    elems: &'a [GradedElement],
    degrees: &'a [u32],
    odd: Vec<bool>,
    ceiling: Option<u32>,
    cap: u32,
}

impl Search<'_> {
    /// Depth-first over non-decreasing index sequences extending `chosen`;
    /// returns the longest nonzero extension found first in that order.
    fn dfs(&self, chosen: &mut Vec<usize>, prod: &GradedElement, degree: u32, best: &mut Vec<usize>) -> Result<(), RingError> {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        if best.len() as u32 >= self.cap || chosen.len() as u32 >= self.cap {
            return Ok(());
        }
        let start = chosen.last().copied().unwrap_or(0);
        for idx in start..self.elems.len() {
            // An odd-degree class squares to zero.
            if chosen.last() == Some(&idx) && self.odd[idx] {
                continue;
            }
            let deg = degree + self.degrees[idx];
            if self.ceiling.is_some_and(|c| deg > c) {
                continue;
            }
            let next = self.p.multiply(prod, &self.elems[idx])?;
            if next.is_zero() {
                continue;
            }
            chosen.push(idx);
            self.dfs(chosen, &next, deg, best)?;
            chosen.pop();
            if best.len() as u32 >= self.cap {
                break;
            }
        }
        Ok(())
    }
}

/// Greatest `k <= budget` such that some product of `k` supplied kernel
/// elements (with repetition) is nonzero. The first nonzero product of the
/// maximal length in index order is returned as the certificate.
pub fn cup_length_kernel(
    p: &RingPresentation,
    diagonal: &DiagonalMap,
    generators_of_kernel: &[GradedElement],
    budget: u32,
) -> Result<KernelCupLength, BoundsError> {
    if budget > MAX_BUDGET {
        return Err(BoundsError::OutOfRange(format!("budget {budget} exceeds {MAX_BUDGET}")));
    }
    if p.fingerprint() != diagonal.source.fingerprint() {
        return Err(BoundsError::Ring(RingError::PresentationMismatch));
    }
    let mut elems = Vec::with_capacity(generators_of_kernel.len());
    let mut degrees = Vec::with_capacity(generators_of_kernel.len());
    for g in generators_of_kernel {
        let g = p.normal_form(g)?;
        if !diagonal.kills(&g)? {
            return Err(BoundsError::NotInKernel(p.display(&g)));
        }
        match p.degree_of(&g) {
            ElementDegree::Homogeneous(d) => degrees.push(d),
            ElementDegree::Zero => degrees.push(0),
            ElementDegree::Mixed => {
                return Err(BoundsError::OutOfRange(format!("`{}` is not homogeneous", p.display(&g))))
            }
        }
        elems.push(g);
    }
    let ceiling = match p.degree_ceiling() {
        Some(c) => p.top_degree(c)?,
        None => None,
    };
    let search = Search {
        p,
        elems: &elems,
        degrees: &degrees,
        odd: degrees.iter().map(|d| d % 2 == 1).collect(),
        ceiling,
        cap: budget,
    };
    let branches: Vec<Result<Vec<usize>, RingError>> = (0..elems.len())
        .into_par_iter()
        .map(|first| {
            let mut best = Vec::new();
            if budget == 0 || elems[first].is_zero() || ceiling.is_some_and(|c| degrees[first] > c) {
                return Ok(best);
            }
            let mut chosen = vec![first];
            search.dfs(&mut chosen, &elems[first], degrees[first], &mut best)?;
            Ok(best)
        })
        .collect();
    let mut best: Vec<usize> = Vec::new();
    for b in branches {
        let b = b?;
        if b.len() > best.len() {
            best = b;
        }
    }
    let certificate = if best.is_empty() {
        None
    } else {
        let factors = best.iter().map(|&i| elems[i].clone()).collect();
        Some(NonzeroCertificate::build(p, factors, "search:kernel-cup-length")?)
    };
    Ok(KernelCupLength { length: best.len() as u32, indices: best, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{complex_projective, point, sphere};
    use crate::rational::int;

    fn spec(d: u32, m: u32, n: u32, r: u32) -> FadellNeuwirthSpec {
        FadellNeuwirthSpec::new(d, m, n, r).unwrap()
    }

    #[test]
    fn difference_classes_are_killed() {
        let s = spec(2, 2, 1, 2);
        let dm = diagonal_fn(&s).unwrap();
        let p = &dm.source;
        let x = p.parse("w^1_1_3 - w^2_1_3").unwrap();
        assert!(dm.apply(&x).unwrap().is_zero());
        let base = p.generator("w_1_2").unwrap();
        assert_eq!(dm.apply(&base).unwrap(), dm.target.generator("w_1_2").unwrap());
    }

    #[test]
    fn diagonal_of_mixed_product_is_rewritten() {
        let s = spec(2, 2, 1, 3);
        let dm = diagonal_fn(&s).unwrap();
        let x = dm.source.parse("w^1_1_3*w^2_2_3").unwrap();
        let img = dm.apply(&x).unwrap();
        // w_13 w_23 = w_12 w_23 - w_12 w_13 in F(R^2, 3).
        assert_eq!(img, dm.target.parse("w_1_2*w_2_3 - w_1_2*w_1_3").unwrap());
    }

    #[test]
    fn ring_map_check_rejects_bad_images() {
        let s = spec(2, 2, 1, 2);
        let good = diagonal_fn(&s).unwrap();
        let mut images = good.generator_images.clone();
        // Rescaling one image breaks the Arnold relation.
        let a = images["w^1_1_3"].scale(&int(2));
        images.insert("w^1_1_3".into(), a);
        let err = DiagonalMap::new(good.source.clone(), good.target.clone(), images).unwrap_err();
        assert!(matches!(err, BoundsError::NotARingMap(_)));
        assert!(err.is_validation());
    }

    #[test]
    fn witness_bounds_small_cases() {
        assert_eq!(verify_witness_fn(&spec(3, 2, 1, 2)).unwrap().implied_lower_bound, 3);
        assert_eq!(verify_witness_fn(&spec(2, 2, 1, 2)).unwrap().implied_lower_bound, 2);
        assert_eq!(verify_witness_fn(&spec(2, 3, 2, 3)).unwrap().implied_lower_bound, 7);
        assert!(matches!(verify_witness_fn(&spec(2, 2, 1, 1)), Err(BoundsError::OutOfRange(_))));
    }

    #[test]
    fn certificates_recheck() {
        for d in [2, 3] {
            let s = spec(d, 2, 2, 2);
            let cert = verify_witness_fn(&s).unwrap();
            let dm = diagonal_fn(&s).unwrap();
            cert.verify(&dm).unwrap();
            let doc = cert.to_doc(&dm.source);
            assert_eq!(doc.factors.len() as u32, doc.bound);
            assert!(cert.to_json(&dm.source).contains("\"witness_monomial\""));
        }
    }

    #[test]
    fn heights() {
        let cp4 = complex_projective(4).unwrap();
        let a = cp4.generator("a").unwrap();
        assert_eq!(euler_height(&cp4, &a, 10).unwrap(), 4);
        assert_eq!(euler_height(&cp4, &a.scale(&int(-3)), 10).unwrap(), 4);
        assert_eq!(euler_height(&cp4, &cp4.zero(), 10).unwrap(), 0);
        let s3 = sphere(3).unwrap();
        assert_eq!(euler_height(&s3, &s3.generator("s").unwrap(), 10).unwrap(), 1);
        assert_eq!(euler_height(&cp4, &a, 2).unwrap(), 2);
    }

    fn cpn_spec(n: u32, r: u32) -> SphereBundleTowerSpec {
        let base = complex_projective(n).unwrap();
        let a = base.generator("a").unwrap();
        SphereBundleTowerSpec::new(base, a, 3, r).unwrap()
    }

    #[test]
    fn height_of_vertical_euler_class_over_cpn() {
        // e(ξ̈)^2 = a^2, so the height is n + 1 for even n and n for odd n.
        for n in 1..=5 {
            let h = tower_euler_height(&cpn_spec(n, 2)).unwrap();
            assert_eq!(h, if n % 2 == 0 { n + 1 } else { n }, "n = {n}");
        }
    }

    #[test]
    fn sphere_bundle_bound_over_cpn() {
        for n in 1..=4 {
            for r in 2..=3 {
                let s = cpn_spec(n, r);
                let h = tower_euler_height(&s).unwrap();
                let cert = sphere_bundle_lower_bound(&s, &default_partition(h, r)).unwrap();
                assert_eq!(cert.implied_lower_bound, h + r - 1);
                assert!(cert.implied_lower_bound >= n + r - 1);
                let tower = build_sphere_bundle_tower(&s).unwrap();
                cert.verify(&tower_diagonal(&tower, &s).unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn every_partition_certifies() {
        let s = cpn_spec(2, 3);
        let h = tower_euler_height(&s).unwrap();
        for b0 in 0..=h {
            let cert = sphere_bundle_lower_bound(&s, &[b0, h - b0]).unwrap();
            assert_eq!(cert.implied_lower_bound, h + 2);
        }
    }

    #[test]
    fn trivial_base_bounds() {
        let odd = SphereBundleTowerSpec::new(point(), point().zero(), 3, 2).unwrap();
        assert_eq!(tower_euler_height(&odd).unwrap(), 1);
        assert_eq!(sphere_bundle_lower_bound(&odd, &[1]).unwrap().implied_lower_bound, 2);
        let even = SphereBundleTowerSpec::new(point(), point().zero(), 4, 3).unwrap();
        assert_eq!(tower_euler_height(&even).unwrap(), 0);
        assert_eq!(sphere_bundle_lower_bound(&even, &[0, 0]).unwrap().implied_lower_bound, 2);
    }

    #[test]
    fn partition_must_match_height() {
        let s = cpn_spec(2, 2);
        let err = sphere_bundle_lower_bound(&s, &[0]).unwrap_err();
        assert!(matches!(err, BoundsError::PartitionMismatch { expected_sum: 3, .. }));
        assert!(!err.is_validation());
        assert!(sphere_bundle_lower_bound(&s, &[2, 1]).is_err());
    }

    #[test]
    fn cup_length_search() {
        let s = spec(2, 2, 1, 2);
        let dm = diagonal_fn(&s).unwrap();
        let gens = fn_kernel_generators(&s, &dm.source).unwrap();
        let res = cup_length_kernel(&dm.source, &dm, &gens, 6).unwrap();
        assert_eq!(res.length, 2);
        res.certificate.unwrap().verify(&dm).unwrap();
        assert_eq!(cup_length_kernel(&dm.source, &dm, &[], 6).unwrap().length, 0);

        let s = spec(3, 2, 1, 2);
        let dm = diagonal_fn(&s).unwrap();
        let mut gens = fn_kernel_generators(&s, &dm.source).unwrap();
        let squares: Vec<_> = gens.iter().map(|g| dm.source.multiply(g, g).unwrap()).collect();
        gens.extend(squares);
        assert_eq!(cup_length_kernel(&dm.source, &dm, &gens, 6).unwrap().length, 3);
    }

    #[test]
    fn cup_length_search_rejects_non_kernel_elements() {
        let s = spec(2, 2, 1, 2);
        let dm = diagonal_fn(&s).unwrap();
        let w = dm.source.generator("w_1_2").unwrap();
        assert!(matches!(cup_length_kernel(&dm.source, &dm, &[w], 4), Err(BoundsError::NotInKernel(_))));
        assert!(matches!(cup_length_kernel(&dm.source, &dm, &[], 13), Err(BoundsError::OutOfRange(_))));
    }

    #[test]
    fn cup_length_search_is_deterministic() {
        let s = spec(2, 2, 2, 2);
        let dm = diagonal_fn(&s).unwrap();
        let gens = fn_kernel_generators(&s, &dm.source).unwrap();
        let a = cup_length_kernel(&dm.source, &dm, &gens, 8).unwrap();
        let b = cup_length_kernel(&dm.source, &dm, &gens, 8).unwrap();
        assert_eq!(a, b);
        let witness = verify_witness_fn(&s).unwrap().implied_lower_bound;
        assert!(a.length >= witness);
    }
}
