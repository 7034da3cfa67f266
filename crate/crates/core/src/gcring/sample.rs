//! Random elements for property checks.

use rand::Rng;

use super::presentation::RingPresentation;
use super::GradedElement;
use crate::rational::ratio;

impl RingPresentation {
    /// A random product of generators of total degree exactly `degree`, or
    /// `None` if a few attempts fail to hit it.
    pub fn random_monomial<R: Rng + ?Sized>(&self, rng: &mut R, degree: u32) -> Option<GradedElement> {
        let n = self.generators().len();
        if degree == 0 {
            return Some(self.one());
        }
        if n == 0 {
            return None;
        }
        for _ in 0..32 {
            let mut ids = Vec::new();
            let mut left = degree;
            while left > 0 {
                let fitting: Vec<usize> = (0..n).filter(|&g| self.degrees()[g] <= left).collect();
                if fitting.is_empty() {
                    break;
                }
                let g = fitting[rng.gen_range(0..fitting.len())];
                left -= self.degrees()[g];
                ids.push(self.gen_id(g as u32).to_string());
            }
            if left == 0 {
                return self.monomial(&ids).ok();
            }
        }
        None
    }

    /// Random homogeneous element of the given degree with up to `max_terms`
    /// terms and small rational coefficients, in normal form.
    pub fn random_homogeneous<R: Rng + ?Sized>(&self, rng: &mut R, degree: u32, max_terms: usize) -> GradedElement {
        let mut e = self.zero();
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            if let Some(m) = self.random_monomial(rng, degree) {
                let c = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
                e = e.add(&m.scale(&c)).expect("same presentation");
            }
        }
        self.normal_form(&e).expect("same presentation")
    }

    /// Degrees in which at least one generator product exists, up to `max`.
    pub fn reachable_degrees(&self, max: u32) -> Vec<u32> {
        let mut reach = vec![false; max as usize + 1];
        reach[0] = true;
        for d in 1..=max as usize {
            reach[d] = self.degrees().iter().any(|&g| g as usize <= d && reach[d - g as usize]);
        }
        reach.iter().enumerate().filter(|(_, &b)| b).map(|(d, _)| d as u32).collect()
    }
}
