use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::presentations::{build_config_space, complex_projective, conf_id};
use crate::rational::Rational;

/// Independent count of the additive basis of `H*(F(R^d, k))`: products of
/// `w_ij` with pairwise distinct second indices, i.e. for each `j` at most
/// one `i < j`. No rewriting involved.
fn brute_force_config_poincare(d: u32, k: u32) -> Vec<u64> {
    let g = (d - 1) as usize;
    let top = (k as usize - 1) * g;
    let mut counts = vec![0u64; top + 1];
    fn go(j: u32, k: u32, chosen: usize, g: usize, counts: &mut [u64]) {
        if j > k {
            counts[chosen * g] += 1;
            return;
        }
        go(j + 1, k, chosen, g, counts);
        for _i in 1..j {
            go(j + 1, k, chosen + 1, g, counts);
        }
    }
    go(2, k, 0, g, &mut counts);
    counts
}

/// Coefficients of prod_{i=1}^{k-1} (1 + i t^{d-1}).
fn product_formula(d: u32, k: u32) -> Vec<u64> {
    let g = (d - 1) as usize;
    let mut poly = vec![0u64; (k as usize - 1) * g + 1];
    poly[0] = 1;
    for i in 1..k as u64 {
        for e in (g..poly.len()).rev() {
            poly[e] += i * poly[e - g];
        }
    }
    poly
}

#[test]
fn arnold_rewrite_example() {
    let p = build_config_space(3, 3).unwrap();
    let e = p.monomial(&["w_1_3", "w_2_3"]).unwrap();
    let nf = p.normal_form(&e).unwrap();
    let expected = p.parse("w_1_2*w_2_3 - w_1_2*w_1_3").unwrap();
    assert_eq!(nf, p.normal_form(&expected).unwrap());
    assert_eq!(nf, expected);
}

#[test]
fn squares_vanish_in_both_parities() {
    for d in [2, 3] {
        let p = build_config_space(d, 3).unwrap();
        let w = p.generator("w_1_2").unwrap();
        assert!(p.multiply(&w, &w).unwrap().is_zero(), "d = {d}");
    }
}

#[test]
fn unit_and_zero_laws() {
    let p = build_config_space(2, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let x = p.random_homogeneous(&mut rng, 2, 4);
        assert_eq!(p.multiply(&p.one(), &x).unwrap(), x);
        assert!(p.multiply(&x, &p.zero()).unwrap().is_zero());
    }
}

#[test]
fn odd_classes_anticommute() {
    let p = build_config_space(2, 3).unwrap();
    let a = p.generator("w_1_2").unwrap();
    let b = p.generator("w_1_3").unwrap();
    let ab = p.multiply(&a, &b).unwrap();
    let ba = p.multiply(&b, &a).unwrap();
    assert!(!ab.is_zero());
    assert_eq!(ab, ba.neg());
}

#[test]
fn unknown_generator_is_reported() {
    let p = build_config_space(2, 3).unwrap();
    assert!(matches!(p.monomial(&["w_1_4"]), Err(RingError::UnknownGenerator(id)) if id == "w_1_4"));
}

#[test]
fn config_space_series_matches_enumeration_and_product() {
    for d in [2, 3] {
        for k in 2..=6 {
            let p = build_config_space(d, k).unwrap();
            let top = (k - 1) * (d - 1);
            let series = p.poincare_series(top + 1).unwrap();
            let mut oracle = brute_force_config_poincare(d, k);
            oracle.push(0);
            assert_eq!(series, oracle, "d = {d}, k = {k}");
            let mut formula = product_formula(d, k);
            formula.push(0);
            assert_eq!(series, formula, "d = {d}, k = {k}");
        }
    }
}

#[test]
fn small_series_examples() {
    assert_eq!(build_config_space(2, 3).unwrap().poincare_series(2).unwrap(), vec![1, 3, 2]);
    assert_eq!(build_config_space(3, 2).unwrap().poincare_series(2).unwrap(), vec![1, 0, 1]);
    let s = build_config_space(2, 4).unwrap().poincare_series(3).unwrap();
    assert_eq!(s[3], 6);
    assert_eq!(complex_projective(2).unwrap().poincare_series(6).unwrap(), vec![1, 0, 1, 0, 1, 0, 0]);
}

#[test]
fn config_spaces_are_confluent() {
    for d in [2, 3, 4] {
        for k in 2..=5 {
            let r = build_config_space(d, k).unwrap().check_confluence();
            assert!(r.passed(), "d = {d}, k = {k}: {:?}", r.failures);
        }
    }
}

fn corrupted_conf4(d: u32) -> RingPresentation {
    let good = build_config_space(d, 4).unwrap();
    let mut doc = good.to_doc();
    let target = [conf_id(1, 4), conf_id(2, 4)];
    let rule = doc.rules.iter_mut().find(|r| r.lhs == target).expect("Arnold rule for (1,2|4)");
    for t in &mut rule.rhs {
        t.coeff = if t.coeff.starts_with('-') { t.coeff[1..].to_string() } else { format!("-{}", t.coeff) };
    }
    RingPresentation::from_doc(&doc).unwrap()
}

#[test]
fn sign_flipped_arnold_rule_is_caught() {
    for d in [2, 3] {
        let bad = corrupted_conf4(d);
        let report = bad.check_confluence();
        assert!(!report.passed(), "d = {d}");
        let triple: Vec<String> = vec![conf_id(1, 4), conf_id(2, 4), conf_id(3, 4)];
        assert!(
            report.failures.iter().any(|f| f.overlap == triple),
            "d = {d}: {:?}",
            report.failures
        );
        assert!(bad.poincare_series(3).is_err());
    }
}

/// Normalizes by picking a random redex at every step.
fn random_strategy_nf(p: &RingPresentation, e: &GradedElement, rng: &mut ChaCha8Rng) -> GradedElement {
    let mut pending: Vec<(Monomial, Rational)> = e.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut done: BTreeMap<Monomial, Rational> = BTreeMap::new();
    while let Some((m, c)) = pending.pop() {
        let f = m.factors();
        let mut redexes = Vec::new();
        for q in 1..f.len() {
            for pp in 0..q {
                if p.rule_for(f[pp], f[q]).is_some() {
                    redexes.push((pp, q));
                }
            }
        }
        if redexes.is_empty() {
            *done.entry(m).or_insert_with(Rational::zero) += c;
            continue;
        }
        let (pp, q) = redexes[rng.gen_range(0..redexes.len())];
        for (nm, nc) in p.rewrite_at(f, pp, q) {
            pending.push((nm, &c * nc));
        }
    }
    GradedElement::from_terms(p.fingerprint(), done)
}

#[test]
fn reduction_strategy_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (d, k) in [(2, 4), (3, 4), (2, 5)] {
        let p = build_config_space(d, k).unwrap();
        for _ in 0..50 {
            let deg = (d - 1) * rng.gen_range(1..k);
            let raw = p.random_monomial(&mut rng, deg).unwrap();
            let det = p.normal_form(&raw).unwrap();
            let rnd = random_strategy_nf(&p, &raw, &mut rng);
            assert_eq!(det, rnd);
        }
    }
}

#[test]
fn top_class_of_config_space_is_nonzero() {
    // w_12 w_13 ... w_1k is admissible and survives.
    for d in [2, 3] {
        let p = build_config_space(d, 5).unwrap();
        let ids: Vec<String> = (2..=5).map(|j| conf_id(1, j)).collect();
        let e = p.normal_form(&p.monomial(&ids).unwrap()).unwrap();
        assert_eq!(e.num_terms(), 1);
        assert_eq!(p.degree_of(&e), ElementDegree::Homogeneous(4 * (d - 1)));
    }
}

mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::presentations::{
        build_fn_fiber_product, build_sphere_bundle_tower, FadellNeuwirthSpec, SphereBundleTowerSpec,
    };

    fn rings() -> Vec<RingPresentation> {
        let base = complex_projective(2).unwrap();
        let e = base.generator("a").unwrap();
        vec![
            build_config_space(2, 4).unwrap(),
            build_config_space(3, 4).unwrap(),
            build_fn_fiber_product(&FadellNeuwirthSpec::new(2, 2, 1, 2).unwrap()).unwrap(),
            build_sphere_bundle_tower(&SphereBundleTowerSpec::new(base, e, 3, 2).unwrap()).unwrap().presentation,
        ]
    }

    fn sample(p: &RingPresentation, seed: u64, max_deg: u32) -> (GradedElement, u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degrees = p.reachable_degrees(max_deg);
        let deg = degrees[rand::Rng::gen_range(&mut rng, 0..degrees.len())];
        (p.random_homogeneous(&mut rng, deg, 3), deg)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normal_form_is_idempotent(which in 0usize..4, seed in any::<u64>()) {
            let p = &rings()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw = p.random_monomial(&mut rng, 2 * p.degrees()[0]).unwrap();
            let once = p.normal_form(&raw).unwrap();
            prop_assert_eq!(p.normal_form(&once).unwrap(), once);
        }

        #[test]
        fn multiplication_is_associative(which in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let p = &rings()[which];
            let (a, _) = sample(p, s1, 3);
            let (b, _) = sample(p, s2, 3);
            let (c, _) = sample(p, s3, 3);
            let left = p.multiply(&p.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = p.multiply(&a, &p.multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn multiplication_is_graded_commutative(which in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>()) {
            let p = &rings()[which];
            let (a, da) = sample(p, s1, 4);
            let (b, db) = sample(p, s2, 4);
            let ab = p.multiply(&a, &b).unwrap();
            let ba = p.multiply(&b, &a).unwrap();
            if (da * db) % 2 == 1 {
                prop_assert_eq!(ab, ba.neg());
            } else {
                prop_assert_eq!(ab, ba);
            }
        }

        #[test]
        fn degrees_add(which in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>()) {
            let p = &rings()[which];
            let (a, da) = sample(p, s1, 4);
            let (b, db) = sample(p, s2, 4);
            let ab = p.multiply(&a, &b).unwrap();
            if !ab.is_zero() {
                prop_assert_eq!(p.degree_of(&ab), ElementDegree::Homogeneous(da + db));
            }
        }

        #[test]
        fn multiplication_distributes(which in 0usize..4, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
            let p = &rings()[which];
            let (a, _) = sample(p, s1, 3);
            let (b, _) = sample(p, s2, 3);
            let (c, _) = sample(p, s3, 3);
            let lhs = p.multiply(&a, &b.add(&c).unwrap()).unwrap();
            let rhs = p.multiply(&a, &b).unwrap().add(&p.multiply(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(lhs, p.normal_form(&rhs).unwrap());
        }
    }
}
