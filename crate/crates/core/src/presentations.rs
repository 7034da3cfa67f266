//! Catalog of cohomology ring presentations: ordered configuration spaces of
//! Euclidean space, fiber products of the Fadell–Neuwirth fibration, and
//! Leray–Hirsch towers of sphere bundles with a section.

use serde::Serialize;
use thiserror::Error;

use crate::gcring::{ElementDegree, Generator, GradedElement, RingError, RingPresentation, RuleSpec};
use crate::rational::int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("presentation is not confluent ({0} failing critical pairs)")]
    NonConfluent(usize),
    #[error("Poincaré series mismatch in degree {degree}: expected {expected}, found {found}")]
    PoincareMismatch { degree: u32, expected: u64, found: u64 },
    #[error("Euler class must be homogeneous of degree {expected}, found {found}")]
    EulerDegree { expected: u32, found: String },
    #[error("an odd-rank oriented bundle has rationally vanishing Euler class; got a nonzero class of odd degree {0}")]
    OddEulerClass(u32),
    #[error("generator id `{0}` of the base collides with a tower generator")]
    NameCollision(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
}

/// Parameters of the fibration `F(R^d, m+n) -> F(R^d, m)` and of its
/// `r`-fold fiber product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FadellNeuwirthSpec {
    pub d: u32,
    pub m: u32,
    pub n: u32,
    pub r: u32,
}

impl FadellNeuwirthSpec {
    /// `r = 1` is accepted and degenerates to the configuration space itself.
    pub fn new(d: u32, m: u32, n: u32, r: u32) -> Result<Self, PresentationError> {
        if d < 2 {
            return Err(PresentationError::OutOfRange(format!("d = {d} must be at least 2")));
        }
        if m < 2 {
            return Err(PresentationError::OutOfRange(format!("m = {m} must be at least 2")));
        }
        if n < 1 {
            return Err(PresentationError::OutOfRange("n must be at least 1".into()));
        }
        if r < 1 {
            return Err(PresentationError::OutOfRange("r must be at least 1".into()));
        }
        Ok(Self { d, m, n, r })
    }

    pub fn generator_degree(&self) -> u32 {
        self.d - 1
    }

    /// Degree of a nonzero top class: `(m - 1 + r n)(d - 1)`.
    pub fn top_degree(&self) -> u32 {
        (self.m - 1 + self.r * self.n) * (self.d - 1)
    }

    /// Poincaré polynomial `prod_{i<m}(1 + i t^{d-1}) * (prod_{i<n}(1 + (m+i) t^{d-1}))^r`,
    /// truncated at `max_degree`.
    pub fn expected_poincare(&self, max_degree: u32) -> Vec<u64> {
        let g = self.generator_degree() as usize;
        let mut poly = vec![0u64; max_degree as usize + 1];
        poly[0] = 1;
        let mut times = |c: u64| {
            for k in (g..poly.len()).rev() {
                poly[k] += c * poly[k - g];
            }
        };
        for i in 1..self.m {
            times(i as u64);
        }
        for _ in 0..self.r {
            for i in 0..self.n {
                times((self.m + i) as u64);
            }
        }
        poly
    }
}

pub fn conf_id(i: u32, j: u32) -> String {
    format!("w_{i}_{j}")
}

/// Class `w^l_ij` pulled back from the `l`-th factor; pairs inside the base
/// (`j <= m`) are shared by all factors.
pub fn fiber_id(spec: &FadellNeuwirthSpec, l: u32, i: u32, j: u32) -> String {
    if j <= spec.m {
        conf_id(i, j)
    } else {
        format!("w^{l}_{i}_{j}")
    }
}

fn arnold_rule(lhs: (String, String), ij: String, jk: String, ik: String) -> RuleSpec {
    // w_ik w_jk -> w_ij w_jk - w_ij w_ik
    RuleSpec::new(lhs.0, lhs.1).term(int(1), &[ij.clone(), jk]).term(int(-1), &[ij, ik])
}

/// Cohomology of the ordered configuration space `F(R^d, k)`.
pub fn build_config_space(d: u32, k: u32) -> Result<RingPresentation, PresentationError> {
    if d < 2 || k < 2 {
        return Err(PresentationError::OutOfRange(format!("need d >= 2 and k >= 2, got d = {d}, k = {k}")));
    }
    let deg = d - 1;
    let mut gens = Vec::new();
    for j in 2..=k {
        for i in 1..j {
            gens.push(Generator::new(conf_id(i, j), deg));
        }
    }
    let mut rules = Vec::new();
    for kk in 3..=k {
        for j in 2..kk {
            for i in 1..j {
                rules.push(arnold_rule((conf_id(i, kk), conf_id(j, kk)), conf_id(i, j), conf_id(j, kk), conf_id(i, kk)));
            }
        }
    }
    if deg % 2 == 0 {
        for g in &gens {
            rules.push(RuleSpec::new(g.id.clone(), g.id.clone()));
        }
    }
    Ok(RingPresentation::new(gens, rules)?.with_name(format!("conf:d={d},k={k}")))
}

/// Cohomology of the `r`-fold fiber product of `F(R^d, m+n) -> F(R^d, m)`:
/// shared base classes, one copy of the fiber classes per factor, Arnold
/// relations within each factor and graded commutativity across factors.
/// The result is validated against the expected Poincaré series up to the
/// top degree.
pub fn build_fn_fiber_product(spec: &FadellNeuwirthSpec) -> Result<RingPresentation, PresentationError> {
    let p = build_fn_fiber_product_unchecked(spec)?;
    validate_poincare(&p, &spec.expected_poincare(spec.top_degree()))?;
    Ok(p)
}

pub(crate) fn build_fn_fiber_product_unchecked(spec: &FadellNeuwirthSpec) -> Result<RingPresentation, PresentationError> {
    let FadellNeuwirthSpec { d, m, n, r } = *spec;
    let deg = d - 1;
    let mut gens = Vec::new();
    // Termination order: second index, then factor, then first index.
    for j in 2..=m {
        for i in 1..j {
            gens.push(Generator::new(conf_id(i, j), deg));
        }
    }
    for j in m + 1..=m + n {
        for l in 1..=r {
            for i in 1..j {
                gens.push(Generator::new(fiber_id(spec, l, i, j), deg));
            }
        }
    }
    let mut rules = Vec::new();
    for k in 3..=m {
        for j in 2..k {
            for i in 1..j {
                rules.push(arnold_rule((conf_id(i, k), conf_id(j, k)), conf_id(i, j), conf_id(j, k), conf_id(i, k)));
            }
        }
    }
    for k in m + 1..=m + n {
        for l in 1..=r {
            for j in 2..k {
                for i in 1..j {
                    let id = |a, b| fiber_id(spec, l, a, b);
                    rules.push(arnold_rule((id(i, k), id(j, k)), id(i, j), id(j, k), id(i, k)));
                }
            }
        }
    }
    if deg % 2 == 0 {
        for g in &gens {
            rules.push(RuleSpec::new(g.id.clone(), g.id.clone()));
        }
    }
    Ok(RingPresentation::new(gens, rules)?.with_name(format!("fn:d={d},m={m},n={n},r={r}")))
}

/// Compares the admissible-monomial counts against `expected` degree by degree.
pub fn validate_poincare(p: &RingPresentation, expected: &[u64]) -> Result<(), PresentationError> {
    let max = expected.len().saturating_sub(1) as u32;
    let found = p.poincare_series(max).map_err(|e| match e {
        RingError::NonConfluent(k) => PresentationError::NonConfluent(k),
        other => other.into(),
    })?;
    for (k, (&e, &f)) in expected.iter().zip(&found).enumerate() {
        if e != f {
            return Err(PresentationError::PoincareMismatch { degree: k as u32, expected: e, found: f });
        }
    }
    Ok(())
}

/// Base presentations: a point.
pub fn point() -> RingPresentation {
    RingPresentation::new(vec![], vec![]).expect("empty presentation").with_name("pt")
}

/// `H*(S^k)`: one generator `s` of degree `k` squaring to zero.
pub fn sphere(k: u32) -> Result<RingPresentation, PresentationError> {
    if k < 1 {
        return Err(PresentationError::OutOfRange("sphere dimension must be positive".into()));
    }
    let g = if k % 2 == 0 { Generator::truncated("s", k, 2) } else { Generator::new("s", k) };
    Ok(RingPresentation::new(vec![g], vec![])?.with_name(format!("s{k}")))
}

/// `H*(CP^n) = Q[a]/(a^{n+1})`, `|a| = 2`.
pub fn complex_projective(n: u32) -> Result<RingPresentation, PresentationError> {
    if n < 1 {
        return Err(PresentationError::OutOfRange("CP^n needs n >= 1".into()));
    }
    Ok(RingPresentation::new(vec![Generator::truncated("a", 2, n + 1)], vec![])?.with_name(format!("cp{n}")))
}

/// Tensor product of presentations. Colliding generator ids of the `k`-th
/// factor (1-based) get the suffix `_k`.
pub fn tensor_product(factors: &[RingPresentation]) -> Result<RingPresentation, PresentationError> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut rules = Vec::new();
    let mut names = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        let taken: std::collections::HashSet<String> = gens.iter().map(|g| g.id.clone()).collect();
        let rename = |id: &str| {
            if taken.contains(id) {
                format!("{id}_{}", k + 1)
            } else {
                id.to_string()
            }
        };
        for g in f.generators() {
            gens.push(Generator { id: rename(&g.id), ..g.clone() });
        }
        for r in f.rules() {
            let mut spec = RuleSpec::new(rename(f.gen_id(r.lhs.0)), rename(f.gen_id(r.lhs.1)));
            for (m, c) in r.rhs.terms() {
                let ids: Vec<String> = f.monomial_ids(m).iter().map(|s| rename(s)).collect();
                spec = spec.term(c.clone(), &ids);
            }
            rules.push(spec);
        }
        names.push(f.name().unwrap_or("?").to_string());
    }
    Ok(RingPresentation::new(gens, rules)?.with_name(names.join("x")))
}

/// Carries `e` from `src` to `dst` by renaming generators (an injective map
/// on generators), then normalizes in `dst`.
pub fn embed(
    src: &RingPresentation,
    e: &GradedElement,
    dst: &RingPresentation,
    rename: impl Fn(&str) -> String,
) -> Result<GradedElement, RingError> {
    src.check(e)?;
    let mut out = dst.zero();
    for (m, c) in e.terms() {
        let ids: Vec<String> = src.monomial_ids(m).iter().map(|s| rename(s)).collect();
        out = out.add(&dst.monomial(&ids)?.scale(c))?;
    }
    dst.normal_form(&out)
}

/// Data of an oriented rank-`q` bundle `xi = eta + trivial line` over a
/// base, from which the sphere-bundle tower is built.
#[derive(Clone, Debug)]
pub struct SphereBundleTowerSpec {
    pub base: RingPresentation,
    /// Euler class of the complement `eta`, homogeneous of degree `q - 1` (or zero).
    pub euler: GradedElement,
    pub q: u32,
    pub r: u32,
}

impl SphereBundleTowerSpec {
    pub fn new(base: RingPresentation, euler: GradedElement, q: u32, r: u32) -> Result<Self, PresentationError> {
        if q < 2 {
            return Err(PresentationError::OutOfRange(format!("rank q = {q} must be at least 2")));
        }
        if r < 1 {
            return Err(PresentationError::OutOfRange("r must be at least 1".into()));
        }
        let euler = base.normal_form(&euler)?;
        match base.degree_of(&euler) {
            ElementDegree::Zero => {}
            ElementDegree::Homogeneous(d) if d == q - 1 => {
                if d % 2 == 1 {
                    return Err(PresentationError::OddEulerClass(d));
                }
            }
            ElementDegree::Homogeneous(d) => {
                return Err(PresentationError::EulerDegree { expected: q - 1, found: d.to_string() })
            }
            ElementDegree::Mixed => {
                return Err(PresentationError::EulerDegree { expected: q - 1, found: "mixed".into() })
            }
        }
        Ok(Self { base, euler, q, r })
    }

    pub fn q_is_odd(&self) -> bool {
        self.q % 2 == 1
    }

    pub fn with_r(&self, r: u32) -> Self {
        Self { r, ..self.clone() }
    }
}

/// `H*(Ė^r_B)` presented as an iterated Leray–Hirsch extension of the base,
/// together with the classes the lower-bound certificate needs.
#[derive(Clone, Debug)]
pub struct SphereBundleTower {
    pub presentation: RingPresentation,
    pub q: u32,
    pub r: u32,
    /// `u`, the cohomological extension of the fiber of `Ė -> B`.
    pub u: GradedElement,
    /// `u_1, ..., u_{r-1}`, one per fiberwise factor.
    pub u_i: Vec<GradedElement>,
    /// Euler class of the complement bundle, pulled back from the base.
    pub euler_eta: GradedElement,
    /// Euler class of the vertical tangent sphere bundle over `Ė`, pulled
    /// back along the first projection.
    pub euler_xi_ddot: GradedElement,
}

pub fn tower_u_id(i: u32) -> String {
    if i == 0 {
        "u".into()
    } else {
        format!("u{i}")
    }
}

/// Builds `H*(B)[u, u_1, ..., u_{r-1}]` modulo `u^2 = e(eta) u` and
/// `u_i^2 = e(xi'') u_i`. For odd `q`, `e(xi'') = 2u - e(eta)`; for even `q`
/// all Euler classes vanish rationally and the extensions are exterior.
pub fn build_sphere_bundle_tower(spec: &SphereBundleTowerSpec) -> Result<SphereBundleTower, PresentationError> {
    let base = &spec.base;
    let base_report = base.check_confluence();
    if !base_report.passed() {
        return Err(PresentationError::NonConfluent(base_report.failures.len()));
    }
    let deg = spec.q - 1;
    let mut gens: Vec<Generator> = base.generators().to_vec();
    for i in 0..spec.r {
        let id = tower_u_id(i);
        if base.has_generator(&id) {
            return Err(PresentationError::NameCollision(id));
        }
        gens.push(Generator::new(id, deg));
    }
    let mut rules = Vec::new();
    for r in base.rules() {
        let mut s = RuleSpec::new(base.gen_id(r.lhs.0), base.gen_id(r.lhs.1));
        for (m, c) in r.rhs.terms() {
            s = s.term(c.clone(), &base.monomial_ids(m));
        }
        rules.push(s);
    }
    if spec.q_is_odd() {
        // u^2 -> e(eta) u
        let mut s = RuleSpec::new("u", "u");
        for (m, c) in spec.euler.terms() {
            let mut ids = base.monomial_ids(m);
            ids.push("u".into());
            s = s.term(c.clone(), &ids);
        }
        rules.push(s);
        // u_i^2 -> (2u - e(eta)) u_i
        for i in 1..spec.r {
            let ui = tower_u_id(i);
            let mut s = RuleSpec::new(ui.clone(), ui.clone()).term(int(2), &["u".to_string(), ui.clone()]);
            for (m, c) in spec.euler.terms() {
                let mut ids = base.monomial_ids(m);
                ids.push(ui.clone());
                s = s.term(-c.clone(), &ids);
            }
            rules.push(s);
        }
    }
    let name = format!("sb:base={},q={},r={}", base.name().unwrap_or("?"), spec.q, spec.r);
    let presentation = RingPresentation::new(gens, rules)?.with_name(name);
    let report = presentation.check_confluence();
    if !report.passed() {
        return Err(PresentationError::NonConfluent(report.failures.len()));
    }
    let euler_eta = embed(base, &spec.euler, &presentation, str::to_string)?;
    let u = presentation.generator("u")?;
    let u_i = (1..spec.r).map(|i| presentation.generator(&tower_u_id(i))).collect::<Result<Vec<_>, _>>()?;
    let euler_xi_ddot = if spec.q_is_odd() {
        u.scale(&int(2)).sub(&euler_eta)?
    } else {
        presentation.zero()
    };
    Ok(SphereBundleTower { presentation, q: spec.q, r: spec.r, u, u_i, euler_eta, euler_xi_ddot })
}

/// Parses a base description: `pt`, `cp<n>`, `s<k>`, or factors joined by `x`
/// (for example `cp2xs3`).
pub fn parse_base(desc: &str) -> Result<RingPresentation, PresentationError> {
    let bad = || PresentationError::UnknownName(desc.to_string());
    let mut factors = Vec::new();
    for part in desc.split('x') {
        let f = if part == "pt" || part == "point" {
            point()
        } else if let Some(n) = part.strip_prefix("cp") {
            complex_projective(n.parse().map_err(|_| bad())?)?
        } else if let Some(k) = part.strip_prefix('s') {
            sphere(k.parse().map_err(|_| bad())?)?
        } else {
            return Err(bad());
        };
        factors.push(f);
    }
    if factors.len() == 1 {
        return Ok(factors.pop().expect("one factor"));
    }
    tensor_product(&factors)
}

/// Default Euler class for a named base: the hyperplane class of the first
/// `CP^n` factor, or zero.
fn default_euler(base: &RingPresentation, q: u32) -> GradedElement {
    if q == 3 {
        if let Ok(a) = base.generator("a") {
            return a;
        }
    }
    base.zero()
}

fn params(body: &str) -> Result<Vec<(&str, &str)>, PresentationError> {
    body.split(',')
        .map(|kv| kv.split_once('=').map(|(k, v)| (k.trim(), v.trim())))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| PresentationError::UnknownName(body.to_string()))
}

fn num(ps: &[(&str, &str)], key: &str, name: &str) -> Result<u32, PresentationError> {
    ps.iter()
        .find(|(k, _)| *k == key)
        .ok_or_else(|| PresentationError::UnknownName(format!("{name} (missing `{key}`)")))?
        .1
        .parse()
        .map_err(|_| PresentationError::UnknownName(format!("{name} (bad `{key}`)")))
}

/// Resolves a sphere-bundle catalog entry `sb:base=<base>,q=<q>,r=<r>[,e=<expr>]`.
pub fn sphere_bundle_from_name(name: &str) -> Result<SphereBundleTower, PresentationError> {
    let body = name.strip_prefix("sb:").ok_or_else(|| PresentationError::UnknownName(name.to_string()))?;
    let ps = params(body)?;
    let base_desc = ps.iter().find(|(k, _)| *k == "base").map(|(_, v)| *v).unwrap_or("pt");
    let base = parse_base(base_desc)?;
    let q = num(&ps, "q", name)?;
    let r = num(&ps, "r", name)?;
    let euler = match ps.iter().find(|(k, _)| *k == "e") {
        Some((_, expr)) => base.parse(expr)?,
        None => default_euler(&base, q),
    };
    build_sphere_bundle_tower(&SphereBundleTowerSpec::new(base, euler, q, r)?)
}

/// Resolves a catalog name such as `conf:d=3,k=4`, `fn:d=2,m=2,n=1,r=2`,
/// `sb:base=cp2,q=3,r=2`, `cp:n=2`, `sphere:k=3` or `pt`.
pub fn from_name(name: &str) -> Result<RingPresentation, PresentationError> {
    let name = name.trim();
    if name == "pt" || name == "point" {
        return Ok(point());
    }
    let (kind, body) = name.split_once(':').ok_or_else(|| PresentationError::UnknownName(name.to_string()))?;
    match kind {
        "conf" => {
            let ps = params(body)?;
            build_config_space(num(&ps, "d", name)?, num(&ps, "k", name)?)
        }
        "fn" => {
            let ps = params(body)?;
            let spec = FadellNeuwirthSpec::new(num(&ps, "d", name)?, num(&ps, "m", name)?, num(&ps, "n", name)?, num(&ps, "r", name)?)?;
            build_fn_fiber_product(&spec)
        }
        "sb" => Ok(sphere_bundle_from_name(name)?.presentation),
        "cp" => complex_projective(num(&params(body)?, "n", name)?),
        "sphere" => sphere(num(&params(body)?, "k", name)?),
        _ => Err(PresentationError::UnknownName(name.to_string())),
    }
}

/// Catalog names of the presentations shipped with the engine.
pub fn shipped_names() -> Vec<String> {
    let mut names = vec!["pt".to_string()];
    names.extend((1..=3).map(|k| format!("sphere:k={k}")));
    names.extend((1..=6).map(|n| format!("cp:n={n}")));
    for d in [2, 3] {
        names.extend((2..=5).map(|k| format!("conf:d={d},k={k}")));
    }
    for d in [2, 3] {
        for m in [2, 3] {
            for n in [1, 2] {
                for r in [2, 3] {
                    names.push(format!("fn:d={d},m={m},n={n},r={r}"));
                }
            }
        }
    }
    for n in 1..=4 {
        for r in [2, 3] {
            names.push(format!("sb:base=cp{n},q=3,r={r}"));
        }
    }
    names
}

/// Polynomial product helper shared by the validation oracles.
pub fn poly_mul(a: &[u64], b: &[u64], max_degree: usize) -> Vec<u64> {
    let mut out = vec![0u64; max_degree + 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j <= max_degree {
                out[i + j] += x * y;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
