use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::RingError;
use crate::rational::Rational;

/// Index of a generator inside its presentation. The index order is the
/// canonical total order on generators.
pub type GenIndex = u32;

/// A product of generators in canonical form: factors sorted ascending by
/// generator index. Even-degree generators may repeat; odd-degree ones never do.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<GenIndex>,
}

impl Monomial {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[GenIndex] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    pub(crate) fn from_sorted(factors: Vec<GenIndex>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0] <= w[1]));
        Self { factors }
    }

    /// Sorts an arbitrary factor sequence into canonical order, returning the
    /// Koszul sign of the permutation. `None` when the product vanishes
    /// because an odd-degree generator repeats or a truncation is exceeded.
    pub fn canonicalize(
        mut factors: Vec<GenIndex>,
        degrees: &[u32],
        truncations: &[Option<u32>],
    ) -> Option<(i8, Monomial)> {
        let sign = koszul_sort(&mut factors, degrees);
        if !Self::admissible_powers(&factors, degrees, truncations) {
            return None;
        }
        Some((sign, Monomial { factors }))
    }

    fn admissible_powers(
        sorted: &[GenIndex],
        degrees: &[u32],
        truncations: &[Option<u32>],
    ) -> bool {
        let mut i = 0;
        while i < sorted.len() {
            let g = sorted[i];
            let mut j = i;
            while j < sorted.len() && sorted[j] == g {
                j += 1;
            }
            let exp = (j - i) as u32;
            if exp >= 2 && degrees[g as usize] % 2 == 1 {
                return false;
            }
            if let Some(t) = truncations[g as usize] {
                if exp >= t {
                    return false;
                }
            }
            i = j;
        }
        true
    }

    pub fn degree(&self, degrees: &[u32]) -> u32 {
        self.factors.iter().map(|&g| degrees[g as usize]).sum()
    }

    /// Multiset (Dershowitz–Manna) extension of the generator order. For a
    /// total order on generators this is lexicographic comparison of the
    /// factor lists read in descending order.
    pub fn termination_cmp(&self, other: &Monomial) -> Ordering {
        let mut a = self.factors.iter().rev();
        let mut b = other.factors.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    o => return o,
                },
            }
        }
    }
}

/// Insertion sort that tracks the sign picked up by swapping two
/// odd-degree factors past each other.
pub(crate) fn koszul_sort(factors: &mut [GenIndex], degrees: &[u32]) -> i8 {
    let mut sign = 1i8;
    for i in 1..factors.len() {
        let mut j = i;
        while j > 0 && factors[j - 1] > factors[j] {
            if degrees[factors[j - 1] as usize] % 2 == 1 && degrees[factors[j] as usize] % 2 == 1 {
                sign = -sign;
            }
            factors.swap(j - 1, j);
            j -= 1;
        }
    }
    sign
}

/// Formal rational linear combination of canonical monomials over one
/// presentation. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElement {
    pub(crate) ring: u64,
    pub(crate) terms: BTreeMap<Monomial, Rational>,
}

/// Degree of an element: the zero element has no well-defined degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementDegree {
    Zero,
    Homogeneous(u32),
    Mixed,
}

impl GradedElement {
    pub(crate) fn empty(ring: u64) -> Self {
        Self { ring, terms: BTreeMap::new() }
    }

    pub(crate) fn from_terms(ring: u64, terms: BTreeMap<Monomial, Rational>) -> Self {
        let mut e = Self { ring, terms };
        e.terms.retain(|_, c| !c.is_zero());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Identifies the presentation (by generator list) this element lives in.
    pub fn ring_fingerprint(&self) -> u64 {
        self.ring
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, other: &Self) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::PresentationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::empty(self.ring);
        }
        Self {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// The term whose monomial is largest in the stored order; used as a
    /// deterministic witness of non-vanishing.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self, degrees: &[u32]) -> ElementDegree {
        let mut seen = None;
        for m in self.terms.keys() {
            let d = m.degree(degrees);
            match seen {
                None => seen = Some(d),
                Some(s) if s != d => return ElementDegree::Mixed,
                _ => {}
            }
        }
        match seen {
            None => ElementDegree::Zero,
            Some(d) => ElementDegree::Homogeneous(d),
        }
    }
}
