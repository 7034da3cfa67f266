use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::element::{ElementDegree, GenIndex, GradedElement, Monomial};
use super::RingError;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub degree: u32,
    /// `Some(t)` imposes `x^t = 0` (truncated polynomial generator).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
}

impl Generator {
    pub fn new(id: impl Into<String>, degree: u32) -> Self {
        Self { id: id.into(), degree, truncation: None }
    }

    pub fn truncated(id: impl Into<String>, degree: u32, truncation: u32) -> Self {
        Self { id: id.into(), degree, truncation: Some(truncation) }
    }
}

/// Oriented quadratic relation `lhs.0 * lhs.1 -> rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: (GenIndex, GenIndex),
    pub rhs: GradedElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// A rule stated by generator ids, before indexing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub lhs: (String, String),
    pub rhs: Vec<(Rational, Vec<String>)>,
}

impl RuleSpec {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        Self { lhs: (a.into(), b.into()), rhs: Vec::new() }
    }

    pub fn term<S: AsRef<str>>(mut self, coeff: Rational, monomial: &[S]) -> Self {
        self.rhs.push((coeff, monomial.iter().map(|s| s.as_ref().to_string()).collect()));
        self
    }
}

/// A finitely presented graded-commutative algebra over the rationals.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    name: Option<String>,
    generators: Vec<Generator>,
    degrees: Vec<u32>,
    truncations: Vec<Option<u32>>,
    index: HashMap<String, GenIndex>,
    rules: Vec<RewriteRule>,
    rule_at: HashMap<(GenIndex, GenIndex), usize>,
    fingerprint: u64,
}

type Memo = HashMap<Monomial, Vec<(Monomial, Rational)>>;

impl RingPresentation {
    /// Builds and validates a presentation. Generators are listed in
    /// increasing termination order; every rule right-hand side must be
    /// homogeneous of the lhs degree and strictly smaller than the lhs.
    pub fn new(generators: Vec<Generator>, rules: Vec<RuleSpec>) -> Result<Self, RingError> {
        let mut index = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.degree == 0 {
                return Err(RingError::ZeroDegree(g.id.clone()));
            }
            if let Some(t) = g.truncation {
                if t < 2 {
                    return Err(RingError::InvalidGenerator(g.id.clone(), "truncation must be at least 2".into()));
                }
            }
            if !valid_id(&g.id) {
                return Err(RingError::InvalidGenerator(g.id.clone(), "ids use letters, digits, `_`, `^`, `'` and `.`".into()));
            }
            if index.insert(g.id.clone(), i as GenIndex).is_some() {
                return Err(RingError::DuplicateGenerator(g.id.clone()));
            }
        }
        let mut hasher = DefaultHasher::new();
        for g in &generators {
            g.id.hash(&mut hasher);
            g.degree.hash(&mut hasher);
            g.truncation.hash(&mut hasher);
        }
        let mut p = Self {
            name: None,
            degrees: generators.iter().map(|g| g.degree).collect(),
            truncations: generators.iter().map(|g| g.truncation).collect(),
            generators,
            index,
            rules: Vec::new(),
            rule_at: HashMap::new(),
            fingerprint: hasher.finish(),
        };
        for spec in rules {
            p.push_rule(spec)?;
        }
        Ok(p)
    }

    fn push_rule(&mut self, spec: RuleSpec) -> Result<(), RingError> {
        let a = self.gen_index(&spec.lhs.0)?;
        let b = self.gen_index(&spec.lhs.1)?;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let label = format!("{}*{}", self.generators[a as usize].id, self.generators[b as usize].id);
        let lhs_mono = Monomial::from_sorted(vec![a, b]);
        let lhs_deg = lhs_mono.degree(&self.degrees);
        if self.rule_at.contains_key(&(a, b)) {
            return Err(RingError::InvalidRule(label, "duplicate left-hand side".into()));
        }
        let mut rhs = GradedElement::empty(self.fingerprint);
        for (c, ids) in &spec.rhs {
            let factors = ids.iter().map(|id| self.gen_index(id)).collect::<Result<Vec<_>, _>>()?;
            if let Some((sign, m)) = Monomial::canonicalize(factors, &self.degrees, &self.truncations) {
                rhs.add_term(m, c * Rational::from_integer(sign.into()));
            }
        }
        // A left-hand side that already vanishes (odd square) may only rewrite to zero.
        if a == b && self.degrees[a as usize] % 2 == 1 && !rhs.is_zero() {
            return Err(RingError::InvalidRule(label, "square of an odd generator must rewrite to 0".into()));
        }
        for m in rhs.terms.keys() {
            if m.degree(&self.degrees) != lhs_deg {
                return Err(RingError::InvalidRule(label, "right-hand side degree differs from left-hand side".into()));
            }
            if m.termination_cmp(&lhs_mono) != std::cmp::Ordering::Less {
                return Err(RingError::InvalidRule(label, "right-hand side monomial is not smaller than left-hand side".into()));
            }
        }
        self.rule_at.insert((a, b), self.rules.len());
        self.rules.push(RewriteRule { lhs: (a, b), rhs });
        Ok(())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub(crate) fn truncations(&self) -> &[Option<u32>] {
        &self.truncations
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn parity(&self) -> Parity {
        let odd = self.degrees.iter().filter(|d| *d % 2 == 1).count();
        if odd == self.degrees.len() && odd > 0 {
            Parity::Odd
        } else if odd == 0 {
            Parity::Even
        } else {
            Parity::Mixed
        }
    }

    pub fn gen_index(&self, id: &str) -> Result<GenIndex, RingError> {
        self.index.get(id).copied().ok_or_else(|| RingError::UnknownGenerator(id.to_string()))
    }

    pub fn gen_id(&self, g: GenIndex) -> &str {
        &self.generators[g as usize].id
    }

    pub fn has_generator(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub(crate) fn rule_for(&self, a: GenIndex, b: GenIndex) -> Option<&RewriteRule> {
        self.rule_at.get(&(a, b)).map(|&i| &self.rules[i])
    }

    pub fn zero(&self) -> GradedElement {
        GradedElement::empty(self.fingerprint)
    }

    pub fn one(&self) -> GradedElement {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> GradedElement {
        let mut e = self.zero();
        e.add_term(Monomial::unit(), c);
        e
    }

    pub fn generator(&self, id: &str) -> Result<GradedElement, RingError> {
        self.monomial(&[id])
    }

    /// The (not yet normalized) product of the named generators in the given order.
    pub fn monomial<S: AsRef<str>>(&self, ids: &[S]) -> Result<GradedElement, RingError> {
        let factors = ids.iter().map(|s| self.gen_index(s.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(self.raw_product(factors, Rational::one()))
    }

    pub(crate) fn raw_product(&self, factors: Vec<GenIndex>, c: Rational) -> GradedElement {
        let mut e = self.zero();
        if let Some((sign, m)) = Monomial::canonicalize(factors, &self.degrees, &self.truncations) {
            e.add_term(m, c * Rational::from_integer(sign.into()));
        }
        e
    }

    pub fn degree_of(&self, e: &GradedElement) -> ElementDegree {
        e.degree(&self.degrees)
    }

    pub(crate) fn check(&self, e: &GradedElement) -> Result<(), RingError> {
        if e.ring != self.fingerprint {
            return Err(RingError::PresentationMismatch);
        }
        Ok(())
    }

    /// Rewrites every monomial until no rule left-hand side divides it.
    pub fn normal_form(&self, e: &GradedElement) -> Result<GradedElement, RingError> {
        self.check(e)?;
        let mut memo = Memo::new();
        Ok(self.normalize_terms(e.terms.iter().map(|(m, c)| (m.clone(), c.clone())), &mut memo))
    }

    fn normalize_terms(
        &self,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
        memo: &mut Memo,
    ) -> GradedElement {
        let mut out = BTreeMap::<Monomial, Rational>::new();
        for (m, c) in terms {
            for (nm, nc) in self.nf_monomial(&m, memo) {
                *out.entry(nm).or_insert_with(Rational::zero) += &c * &nc;
            }
        }
        GradedElement::from_terms(self.fingerprint, out)
    }

    /// First reducible factor pair `(p, q)`, `p < q`, in a canonical monomial.
    pub(crate) fn find_redex(&self, factors: &[GenIndex]) -> Option<(usize, usize)> {
        if self.rules.is_empty() {
            return None;
        }
        for q in 1..factors.len() {
            for p in 0..q {
                if self.rule_at.contains_key(&(factors[p], factors[q])) {
                    return Some((p, q));
                }
            }
        }
        None
    }

    /// One rewrite step at positions `p < q` of a sorted factor list. The
    /// result is a list of canonical (signed) monomials, not yet normalized.
    pub(crate) fn rewrite_at(&self, factors: &[GenIndex], p: usize, q: usize) -> Vec<(Monomial, Rational)> {
        let rule = &self.rules[self.rule_at[&(factors[p], factors[q])]];
        let deg = |g: GenIndex| self.degrees[g as usize];
        // Move factors[p] to the front, then factors[q] right behind it.
        let before_p: u32 = factors[..p].iter().map(|&g| deg(g)).sum();
        let before_q: u32 = factors[..q].iter().map(|&g| deg(g)).sum::<u32>() - deg(factors[p]);
        let flips = deg(factors[p]) * before_p + deg(factors[q]) * before_q;
        let extract_sign = if flips % 2 == 0 { 1 } else { -1 };
        let rest: Vec<GenIndex> = factors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p && i != q)
            .map(|(_, &g)| g)
            .collect();
        let mut out = Vec::with_capacity(rule.rhs.num_terms());
        for (m, c) in rule.rhs.terms() {
            let mut f = m.factors().to_vec();
            f.extend_from_slice(&rest);
            if let Some((sign, nm)) = Monomial::canonicalize(f, &self.degrees, &self.truncations) {
                let s = i64::from(sign) * extract_sign;
                out.push((nm, c * Rational::from_integer(s.into())));
            }
        }
        out
    }

    fn nf_monomial(&self, m: &Monomial, memo: &mut Memo) -> Vec<(Monomial, Rational)> {
        let Some((p, q)) = self.find_redex(m.factors()) else {
            return vec![(m.clone(), Rational::one())];
        };
        if let Some(hit) = memo.get(m) {
            return hit.clone();
        }
        let mut acc = BTreeMap::<Monomial, Rational>::new();
        for (nm, c) in self.rewrite_at(m.factors(), p, q) {
            for (fm, fc) in self.nf_monomial(&nm, memo) {
                *acc.entry(fm).or_insert_with(Rational::zero) += &c * &fc;
            }
        }
        let res: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        memo.insert(m.clone(), res.clone());
        res
    }

    /// Graded-commutative product, returned in normal form.
    pub fn multiply(&self, a: &GradedElement, b: &GradedElement) -> Result<GradedElement, RingError> {
        self.check(a)?;
        self.check(b)?;
        let mut raw = BTreeMap::<Monomial, Rational>::new();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut f = ma.factors().to_vec();
                f.extend_from_slice(mb.factors());
                if let Some((sign, m)) = Monomial::canonicalize(f, &self.degrees, &self.truncations) {
                    let c = ca * cb * Rational::from_integer(sign.into());
                    *raw.entry(m).or_insert_with(Rational::zero) += c;
                }
            }
        }
        let mut memo = Memo::new();
        Ok(self.normalize_terms(raw.into_iter().filter(|(_, c)| !c.is_zero()), &mut memo))
    }

    pub fn product(&self, factors: &[GradedElement]) -> Result<GradedElement, RingError> {
        let mut acc = self.one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
            if acc.is_zero() {
                // Still validate the remaining factors' ring.
                for g in factors {
                    self.check(g)?;
                }
                break;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: &GradedElement, k: u32) -> Result<GradedElement, RingError> {
        self.check(e)?;
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, e)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    /// Parses expressions such as `w_1_3*w_2_3 - 2/3*u + 1`.
    pub fn parse(&self, expr: &str) -> Result<GradedElement, RingError> {
        let mut out = self.zero();
        let mut rest = expr.trim();
        if rest.is_empty() {
            return Err(RingError::Parse("empty expression".into()));
        }
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        loop {
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = rest[..end].trim();
            if term.is_empty() {
                return Err(RingError::Parse(format!("empty term in `{expr}`")));
            }
            let mut coeff = Rational::from_integer(sign.into());
            let mut factors = Vec::new();
            for tok in term.split('*').map(str::trim) {
                if tok.is_empty() {
                    return Err(RingError::Parse(format!("empty factor in `{term}`")));
                }
                if tok.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff *= rational::parse(tok).ok_or_else(|| RingError::Parse(format!("bad coefficient `{tok}`")))?;
                } else {
                    factors.push(self.gen_index(tok)?);
                }
            }
            let t = self.raw_product(factors, coeff);
            out = out.add(&t)?;
            if end == rest.len() {
                break;
            }
            sign = if rest[end..].starts_with('-') { -1 } else { 1 };
            rest = &rest[end + 1..];
        }
        Ok(out)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".into();
        }
        m.factors().iter().map(|&g| self.gen_id(g)).collect::<Vec<_>>().join("*")
    }

    pub fn monomial_ids(&self, m: &Monomial) -> Vec<String> {
        m.factors().iter().map(|&g| self.gen_id(g).to_string()).collect()
    }

    /// Human-readable form, e.g. `w_1_2*w_2_3 - w_1_2*w_1_3`.
    pub fn display(&self, e: &GradedElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in e.terms().rev().enumerate() {
            let neg = c < &Rational::zero();
            let a = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = self.format_monomial(m);
            if a.is_one() {
                s.push_str(&body);
            } else if m.is_unit() {
                s.push_str(&a.to_string());
            } else {
                s.push_str(&format!("{a}*{body}"));
            }
        }
        s
    }
}

fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with(|c: char| c.is_ascii_digit())
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '\'' | '.'))
}
