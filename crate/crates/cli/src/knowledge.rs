//! Closed-form complexity values with provenance. Lower bounds that the
//! core crate can certify are backed by a certificate; values resting on
//! quoted upper bounds are stored as constants and never recomputed.

use dtc_core::bounds::{verify_witness_fn, BoundsError, CertificateDoc};
use dtc_core::presentations::FadellNeuwirthSpec;
use dtc_core::rational::{self, Rational};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KnowledgeError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("record violates lower <= exact <= upper: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProvenanceKind {
    Certificate,
    PaperConstant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tag: String,
    pub kind: ProvenanceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
}

impl Provenance {
    fn constant(tag: &str) -> Self {
        Self { tag: tag.into(), kind: ProvenanceKind::PaperConstant, certificate: None }
    }

    fn certified(tag: &str, cert: CertificateDoc) -> Self {
        Self { tag: tag.into(), kind: ProvenanceKind::Certificate, certificate: Some(cert) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComplexityRecord {
    pub family: String,
    pub parameters: serde_json::Value,
    pub lower: Option<u64>,
    pub upper: Option<u64>,
    pub exact: Option<u64>,
    /// Further named constants, such as the classical `TC_r` value a record is
    /// compared with.
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub comparisons: serde_json::Map<String, serde_json::Value>,
    pub provenance: Vec<Provenance>,
}

impl ComplexityRecord {
    fn checked(self) -> Result<Self, KnowledgeError> {
        let bad = |what: &str| Err(KnowledgeError::Inconsistent(format!("{}: {what}", self.family)));
        if let (Some(l), Some(u)) = (self.lower, self.upper) {
            if l > u {
                return bad("lower > upper");
            }
        }
        if let Some(e) = self.exact {
            if self.lower.is_some_and(|l| l > e) || self.upper.is_some_and(|u| u < e) {
                return bad("exact outside [lower, upper]");
            }
        }
        if self.provenance.is_empty() {
            return bad("no provenance");
        }
        Ok(self)
    }

    pub fn tags(&self) -> Vec<String> {
        self.provenance.iter().map(|p| p.tag.clone()).collect()
    }
}

/// Largest fiber product (by generator count) certified on the fly.
pub const DESK_SCALE_GENERATORS: u32 = 40;

fn fn_generator_count(s: &FadellNeuwirthSpec) -> u32 {
    let base = s.m * (s.m - 1) / 2;
    let fiber: u32 = (s.m + 1..=s.m + s.n).map(|j| j - 1).sum();
    base + s.r * fiber
}

pub fn fn_is_desk_scale(s: &FadellNeuwirthSpec) -> bool {
    fn_generator_count(s) <= DESK_SCALE_GENERATORS && s.r * s.n + s.m <= 13
}

/// `rn + m - 1` for odd `d`, `rn + m - 2` for even `d`.
pub fn fn_closed_form(d: u32, m: u32, n: u32, r: u32) -> u64 {
    (r * n + m) as u64 - if d % 2 == 1 { 1 } else { 2 }
}

pub fn value_fadell_neuwirth(d: u32, m: u32, n: u32, r: u32) -> Result<ComplexityRecord, KnowledgeError> {
    if r < 2 {
        return Err(KnowledgeError::OutOfRange(format!("r = {r} must be at least 2")));
    }
    let spec = FadellNeuwirthSpec::new(d, m, n, r).map_err(|e| KnowledgeError::OutOfRange(e.to_string()))?;
    let exact = fn_closed_form(d, m, n, r);
    let mut provenance = Vec::new();
    if fn_is_desk_scale(&spec) {
        let cert = verify_witness_fn(&spec)?;
        let p = dtc_core::presentations::build_fn_fiber_product(&spec).map_err(BoundsError::from)?;
        provenance.push(Provenance::certified("fadell-neuwirth:zero-divisor-product", cert.to_doc(&p)));
    } else {
        provenance.push(Provenance::constant("fadell-neuwirth:zero-divisor-product"));
    }
    provenance.push(Provenance::constant("fadell-neuwirth:sequential-tc-upper-bound"));
    ComplexityRecord {
        family: "fadell-neuwirth".into(),
        parameters: serde_json::json!({ "d": d, "m": m, "n": n, "r": r }),
        lower: Some(exact),
        upper: Some(exact),
        exact: Some(exact),
        comparisons: Default::default(),
        provenance,
    }
    .checked()
}

/// Principal `SO(3)`-bundles: `dTC_r <= min(2^(r-1) - 1, 2r + 1)` against
/// `TC_r = 3(r - 1)`, with the lower bound `r - 1`.
pub fn value_so3_bundle(r: u32) -> Result<ComplexityRecord, KnowledgeError> {
    if r < 2 {
        return Err(KnowledgeError::OutOfRange(format!("r = {r} must be at least 2")));
    }
    let r64 = r as u64;
    let pow = if r <= 64 { (1u128 << (r - 1)) - 1 } else { u128::MAX };
    let upper = pow.min(2 * r as u128 + 1) as u64;
    let lower = r64 - 1;
    let mut comparisons = serde_json::Map::new();
    comparisons.insert("tc_r".into(), serde_json::json!(3 * (r64 - 1)));
    ComplexityRecord {
        family: "so3-principal-bundle".into(),
        parameters: serde_json::json!({ "r": r }),
        lower: Some(lower),
        upper: Some(upper),
        exact: (lower == upper).then_some(lower),
        comparisons,
        provenance: vec![
            Provenance::constant("principal-bundle:equals-group-complexity"),
            Provenance::constant("rp3:distributional-upper-bound"),
            Provenance::constant("rationally-acyclic-fiber:lower-bound"),
            Provenance::constant("so3:sequential-tc"),
        ],
    }
    .checked()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SphereAction {
    Antipodal,
    /// `τ_i` negates the coordinates from position `p_i` on.
    General(Vec<u32>),
}

pub fn value_product_spheres(dims: &[u32], r: u32, action: &SphereAction) -> Result<ComplexityRecord, KnowledgeError> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(KnowledgeError::OutOfRange("sphere dimensions must be positive".into()));
    }
    if r < 2 {
        return Err(KnowledgeError::OutOfRange(format!("r = {r} must be at least 2")));
    }
    let m = dims.len() as u64;
    let ell = dims.iter().filter(|&&n| n % 2 == 0).count() as u64;
    let lower = m * (r as u64 - 1) + ell;
    let (upper, exact, tag) = match action {
        SphereAction::Antipodal => (Some(lower), Some(lower), "product-spheres:antipodal"),
        SphereAction::General(ps) => {
            if ps.len() != dims.len() {
                return Err(KnowledgeError::OutOfRange(format!("{} involution indices for {} spheres", ps.len(), dims.len())));
            }
            for (&p, &n) in ps.iter().zip(dims) {
                if p < 2 || p > n + 1 {
                    return Err(KnowledgeError::OutOfRange(format!("involution index p = {p} must lie in [2, {}]", n + 1)));
                }
            }
            let upper = r as u64 * m;
            (Some(upper), (ell == m).then_some(upper), "product-spheres:general-involution")
        }
    };
    ComplexityRecord {
        family: "product-of-spheres".into(),
        parameters: serde_json::json!({
            "dims": dims,
            "r": r,
            "action": match action { SphereAction::Antipodal => serde_json::json!("antipodal"), SphereAction::General(p) => serde_json::json!({ "general": p }) },
        }),
        lower: Some(lower),
        upper,
        exact,
        comparisons: Default::default(),
        provenance: vec![Provenance::constant(tag)],
    }
    .checked()
}

/// `(dTC_{G,r}(F) + 1)^2 - 1`.
pub fn value_associate_upper(dtc_g_r: u64) -> u64 {
    (dtc_g_r + 1) * (dtc_g_r + 1) - 1
}

pub fn value_associate_record(dtc_g_r: u64) -> Result<ComplexityRecord, KnowledgeError> {
    ComplexityRecord {
        family: "associated-bundle".into(),
        parameters: serde_json::json!({ "dtc_g_r": dtc_g_r }),
        lower: None,
        upper: Some(value_associate_upper(dtc_g_r)),
        exact: None,
        comparisons: Default::default(),
        provenance: vec![Provenance::constant("associated-bundle:measure-multiplication-upper-bound")],
    }
    .checked()
}

/// `n_r = (2^(2r-2) - 1) / (r - 1)`.
pub fn value_son_threshold(r: u32) -> Result<Rational, KnowledgeError> {
    if r < 2 {
        return Err(KnowledgeError::OutOfRange(format!("r = {r} must be at least 2")));
    }
    let pow = (0..2 * r - 2).fold(rational::int(1), |acc, _| acc * rational::int(2));
    Ok((pow - rational::int(1)) / rational::int(r as i64 - 1))
}

pub fn value_son_threshold_json(r: u32) -> Result<serde_json::Value, KnowledgeError> {
    let t = value_son_threshold(r)?;
    Ok(serde_json::json!({
        "family": "son-threshold",
        "parameters": { "r": r },
        "threshold": rational::to_string(&t),
        "regime": "strict inequality for n > threshold",
        "provenance": [Provenance::constant("son-principal-bundle:strict-regime")],
    }))
}

/// Hopf bundles `S^(2n+1) -> CP^n`: `dTC_r = dTC_r(S^1) = r - 1`.
pub fn value_hopf(n: u32, r: u32) -> Result<ComplexityRecord, KnowledgeError> {
    if r < 2 || n < 1 {
        return Err(KnowledgeError::OutOfRange(format!("need n >= 1 and r >= 2, got n = {n}, r = {r}")));
    }
    let v = r as u64 - 1;
    ComplexityRecord {
        family: "hopf-bundle".into(),
        parameters: serde_json::json!({ "n": n, "r": r }),
        lower: Some(v),
        upper: Some(v),
        exact: Some(v),
        comparisons: Default::default(),
        provenance: vec![
            Provenance::constant("principal-bundle:equals-group-complexity"),
            Provenance::constant("circle:sequential-distributional-complexity"),
        ],
    }
    .checked()
}
