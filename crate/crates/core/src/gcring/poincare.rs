use super::element::GenIndex;
use super::presentation::RingPresentation;
use super::RingError;

impl RingPresentation {
    /// Dimensions of the graded pieces in degrees `0..=max_degree`, counted
    /// as admissible (irreducible, non-vanishing) monomials. Only meaningful
    /// for a confluent presentation, which is checked first.
    pub fn poincare_series(&self, max_degree: u32) -> Result<Vec<u64>, RingError> {
        let report = self.check_confluence();
        if !report.passed() {
            return Err(RingError::NonConfluent(report.failures.len()));
        }
        Ok(self.count_admissible(max_degree))
    }

    /// Admissible-monomial counts without the confluence gate.
    pub(crate) fn count_admissible(&self, max_degree: u32) -> Vec<u64> {
        let n = self.generators().len();
        // conflicts[g] = generators h <= g such that h*g is a rule lhs.
        let mut conflicts: Vec<Vec<GenIndex>> = vec![Vec::new(); n];
        for r in self.rules() {
            conflicts[r.lhs.1 as usize].push(r.lhs.0);
        }
        let max_exp: Vec<u32> = (0..n)
            .map(|g| {
                let gi = g as GenIndex;
                if self.degrees()[g] % 2 == 1 || conflicts[g].contains(&gi) {
                    1
                } else if let Some(t) = self.truncations()[g] {
                    t - 1
                } else {
                    u32::MAX
                }
            })
            .collect();
        let mut counts = vec![0u64; max_degree as usize + 1];
        let mut chosen = vec![false; n];
        self.enumerate(0, 0, max_degree, &conflicts, &max_exp, &mut chosen, &mut counts);
        counts
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &self,
        g: usize,
        degree: u32,
        max_degree: u32,
        conflicts: &[Vec<GenIndex>],
        max_exp: &[u32],
        chosen: &mut [bool],
        counts: &mut [u64],
    ) {
        if g == chosen.len() {
            counts[degree as usize] += 1;
            return;
        }
        self.enumerate(g + 1, degree, max_degree, conflicts, max_exp, chosen, counts);
        if conflicts[g].iter().any(|&h| (h as usize) != g && chosen[h as usize]) {
            return;
        }
        let dg = self.degrees()[g];
        chosen[g] = true;
        let mut e = 1u32;
        while e <= max_exp[g] && degree + e * dg <= max_degree {
            self.enumerate(g + 1, degree + e * dg, max_degree, conflicts, max_exp, chosen, counts);
            e += 1;
        }
        chosen[g] = false;
    }

    /// Largest degree with a nonzero graded piece, searching up to `limit`.
    pub fn top_degree(&self, limit: u32) -> Result<Option<u32>, RingError> {
        let series = self.poincare_series(limit)?;
        Ok(series.iter().rposition(|&c| c > 0).map(|d| d as u32))
    }

    /// An upper bound on the degree of any admissible monomial, available
    /// when every generator has bounded exponent (odd, squared by a rule, or
    /// truncated).
    pub fn degree_ceiling(&self) -> Option<u32> {
        let mut total = 0u32;
        for (g, &d) in self.degrees().iter().enumerate() {
            let gi = g as GenIndex;
            let e = if d % 2 == 1 || self.rule_for(gi, gi).is_some() {
                1
            } else {
                self.truncations()[g]? - 1
            };
            total += e * d;
        }
        Some(total)
    }
}

#[cfg(test)]
mod tests {
    use crate::gcring::{Generator, RingPresentation, RuleSpec};
    use crate::rational::int;

    #[test]
    fn empty_presentation_is_a_point() {
        let p = RingPresentation::new(vec![], vec![]).unwrap();
        assert_eq!(p.poincare_series(3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn truncated_polynomial_ring() {
        let p = RingPresentation::new(vec![Generator::truncated("a", 2, 3)], vec![]).unwrap();
        assert_eq!(p.poincare_series(6).unwrap(), vec![1, 0, 1, 0, 1, 0, 0]);
        assert_eq!(p.top_degree(10).unwrap(), Some(4));
    }

    #[test]
    fn non_confluent_presentation_is_refused() {
        let p = RingPresentation::new(
            vec![Generator::new("a", 2), Generator::new("b", 2)],
            vec![
                RuleSpec::new("b", "b").term(int(1), &["a", "a"]),
                RuleSpec::new("a", "b").term(int(2), &["a", "a"]),
            ],
        )
        .unwrap();
        assert!(p.poincare_series(4).is_err());
    }
}
