use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use super::element::{koszul_sort, GenIndex, GradedElement, Monomial};
use super::presentation::RingPresentation;
use crate::rational::Rational;

/// An overlap whose alternative reductions disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPairFailure {
    pub overlap: Vec<String>,
    pub reductions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub failures: Vec<CriticalPairFailure>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl RingPresentation {
    /// Checks local confluence on every overlap of two rule left-hand sides,
    /// and of a left-hand side with an implicit vanishing (odd square or
    /// truncation). Each overlap is reduced in every possible first step and
    /// the resulting normal forms must coincide.
    pub fn check_confluence(&self) -> ConfluenceReport {
        let overlaps = self.overlaps();
        let mut failures = Vec::new();
        for ov in &overlaps {
            let results = self.all_first_step_normal_forms(ov);
            if results.windows(2).any(|w| w[0] != w[1]) {
                let mut shown: Vec<String> = results.iter().map(|e| self.display(e)).collect();
                shown.dedup();
                failures.push(CriticalPairFailure {
                    overlap: ov.iter().map(|&g| self.gen_id(g).to_string()).collect(),
                    reductions: shown,
                });
            }
        }
        ConfluenceReport { overlaps_checked: overlaps.len(), failures }
    }

    fn overlaps(&self) -> BTreeSet<Vec<GenIndex>> {
        let mut out = BTreeSet::new();
        let rules = self.rules();
        let lhs_counts = |a: GenIndex, b: GenIndex| {
            let mut m = BTreeMap::new();
            *m.entry(a).or_insert(0u32) += 1;
            *m.entry(b).or_insert(0u32) += 1;
            m
        };
        let flatten = |m: &BTreeMap<GenIndex, u32>| {
            m.iter().flat_map(|(&g, &k)| std::iter::repeat_n(g, k as usize)).collect::<Vec<_>>()
        };
        // Smallest multiset containing both left-hand sides.
        let join = |x: &BTreeMap<GenIndex, u32>, y: &BTreeMap<GenIndex, u32>| {
            let mut m = x.clone();
            for (&g, &k) in y {
                let e = m.entry(g).or_insert(0);
                *e = (*e).max(k);
            }
            m
        };
        for (i, r1) in rules.iter().enumerate() {
            let c1 = lhs_counts(r1.lhs.0, r1.lhs.1);
            for r2 in &rules[i..] {
                let c2 = lhs_counts(r2.lhs.0, r2.lhs.1);
                if !c1.keys().any(|g| c2.contains_key(g)) {
                    continue;
                }
                if std::ptr::eq(r1, r2) {
                    if r1.lhs.0 == r1.lhs.1 {
                        out.insert(vec![r1.lhs.0; 3]);
                    }
                    continue;
                }
                out.insert(flatten(&join(&c1, &c2)));
            }
            for g in c1.keys().copied() {
                let vanish_at = if self.degrees()[g as usize] % 2 == 1 {
                    Some(2)
                } else {
                    self.truncations()[g as usize]
                };
                if let Some(t) = vanish_at {
                    let mut c = c1.clone();
                    let e = c.entry(g).or_insert(0);
                    *e = (*e).max(t);
                    out.insert(flatten(&c));
                }
            }
        }
        out
    }

    /// Normal forms reached by each distinct first reduction step of a raw
    /// (sorted, possibly vanishing) factor multiset.
    fn all_first_step_normal_forms(&self, sorted: &[GenIndex]) -> Vec<GradedElement> {
        let mut results = Vec::new();
        let vanishes = {
            let mut f = sorted.to_vec();
            koszul_sort(&mut f, self.degrees());
            Monomial::canonicalize(f, self.degrees(), self.truncations()).is_none()
        };
        if vanishes {
            results.push(self.zero());
        }
        let mut seen = BTreeSet::new();
        for q in 1..sorted.len() {
            for p in 0..q {
                let key = (sorted[p], sorted[q]);
                if self.rule_for(key.0, key.1).is_none() || !seen.insert(key) {
                    continue;
                }
                let step = self.rewrite_at(sorted, p, q);
                let e = GradedElement::from_terms(self.fingerprint(), collect(step));
                results.push(self.normal_form(&e).expect("same presentation"));
            }
        }
        results
    }
}

fn collect(terms: Vec<(Monomial, Rational)>) -> BTreeMap<Monomial, Rational> {
    let mut m = BTreeMap::new();
    for (mono, c) in terms {
        *m.entry(mono).or_insert_with(Rational::zero) += c;
    }
    m
}
