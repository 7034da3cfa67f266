use super::*;
use crate::gcring::ElementDegree;

/// Counts admissible monomials of the fiber product directly: for every base
/// point `j <= m` choose at most one `i < j`, and independently for every
/// factor `l` and fiber point `j > m` choose at most one `i < j`.
fn fn_basis_count(d: u32, m: u32, n: u32, r: u32) -> Vec<u64> {
    let g = (d - 1) as usize;
    let mut slots: Vec<u64> = (2..=m).map(|j| (j - 1) as u64).collect();
    for _ in 0..r {
        slots.extend((m + 1..=m + n).map(|j| (j - 1) as u64));
    }
    let mut counts = vec![0u64; slots.len() * g + 1];
    fn go(k: usize, chosen: usize, weight: u64, slots: &[u64], g: usize, counts: &mut [u64]) {
        if k == slots.len() {
            counts[chosen * g] += weight;
            return;
        }
        go(k + 1, chosen, weight, slots, g, counts);
        go(k + 1, chosen + 1, weight * slots[k], slots, g, counts);
    }
    go(0, 0, 1, &slots, g, &mut counts);
    counts
}

#[test]
fn planar_three_points() {
    let p = build_config_space(2, 3).unwrap();
    assert_eq!(p.generators().len(), 3);
    assert_eq!(p.rules().len(), 1);
    assert_eq!(p.poincare_series(2).unwrap(), vec![1, 3, 2]);
}

#[test]
fn even_generator_degree_adds_square_rules() {
    let p = build_config_space(3, 3).unwrap();
    assert_eq!(p.rules().len(), 1 + 3);
    assert_eq!(build_config_space(3, 2).unwrap().poincare_series(2).unwrap(), vec![1, 0, 1]);
}

#[test]
fn planar_four_points_top_degree() {
    let p = build_config_space(2, 4).unwrap();
    let s = p.poincare_series(4).unwrap();
    assert_eq!(s, vec![1, 6, 11, 6, 0]);
    assert_eq!(p.top_degree(4).unwrap(), Some(3));
}

#[test]
fn out_of_range_parameters() {
    assert!(matches!(build_config_space(1, 3), Err(PresentationError::OutOfRange(_))));
    assert!(matches!(build_config_space(2, 1), Err(PresentationError::OutOfRange(_))));
    assert!(FadellNeuwirthSpec::new(2, 1, 1, 2).is_err());
    assert!(FadellNeuwirthSpec::new(2, 2, 0, 2).is_err());
    assert!(FadellNeuwirthSpec::new(2, 2, 1, 0).is_err());
}

#[test]
fn fiber_product_small_case() {
    let spec = FadellNeuwirthSpec::new(2, 2, 1, 2).unwrap();
    let p = build_fn_fiber_product(&spec).unwrap();
    // w_1_2 plus two copies of {w_1_3, w_2_3}.
    assert_eq!(p.generators().len(), 5);
    let s = p.poincare_series(spec.top_degree()).unwrap();
    assert_eq!(s, vec![1, 5, 8, 4]);
    assert_eq!(fiber_id(&spec, 2, 1, 3), "w^2_1_3");
    assert_eq!(fiber_id(&spec, 2, 1, 2), "w_1_2");
}

#[test]
fn single_factor_is_the_configuration_space() {
    for d in [2, 3] {
        for (m, n) in [(2, 1), (2, 2), (3, 1)] {
            let spec = FadellNeuwirthSpec::new(d, m, n, 1).unwrap();
            let top = spec.top_degree();
            let a = build_fn_fiber_product(&spec).unwrap().poincare_series(top).unwrap();
            let b = build_config_space(d, m + n).unwrap().poincare_series(top).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn fiber_product_series_match_oracle() {
    for d in [2, 3] {
        for m in 2..=3 {
            for n in 1..=2 {
                for r in 1..=3 {
                    let spec = FadellNeuwirthSpec::new(d, m, n, r).unwrap();
                    let p = build_fn_fiber_product(&spec).unwrap();
                    let top = spec.top_degree();
                    let mut series = p.poincare_series(top + 1).unwrap();
                    assert_eq!(series.pop(), Some(0));
                    assert_eq!(series, fn_basis_count(d, m, n, r), "({d},{m},{n},{r})");
                    assert_eq!(series, spec.expected_poincare(top), "({d},{m},{n},{r})");
                }
            }
        }
    }
}

#[test]
fn validation_reports_the_first_bad_degree() {
    let p = build_config_space(2, 3).unwrap();
    let err = validate_poincare(&p, &[1, 3, 3]).unwrap_err();
    assert_eq!(err, PresentationError::PoincareMismatch { degree: 2, expected: 3, found: 2 });
}

fn cp2_tower(q: u32, r: u32, euler: Option<&str>) -> SphereBundleTower {
    let base = complex_projective(2).unwrap();
    let e = match euler {
        Some(s) => base.parse(s).unwrap(),
        None => base.zero(),
    };
    build_sphere_bundle_tower(&SphereBundleTowerSpec::new(base, e, q, r).unwrap()).unwrap()
}

#[test]
fn tower_over_cp2_has_leray_hirsch_series() {
    let t = cp2_tower(3, 2, Some("a"));
    assert_eq!(t.presentation.poincare_series(8).unwrap(), vec![1, 0, 3, 0, 4, 0, 3, 0, 1]);
    for r in 1..=4 {
        let t = cp2_tower(3, r, Some("a"));
        let top = 4 + 2 * r;
        let expected = poly_mul(&[1, 0, 1, 0, 1], &binomial_series(2, r), top as usize);
        assert_eq!(t.presentation.poincare_series(top).unwrap(), expected, "r = {r}");
    }
}

fn binomial_series(g: usize, r: u32) -> Vec<u64> {
    let mut poly = vec![1u64];
    for _ in 0..r {
        let mut next = vec![0u64; poly.len() + g];
        for (i, &c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + g] += c;
        }
        poly = next;
    }
    poly
}

#[test]
fn tower_relations_hold() {
    let t = cp2_tower(3, 3, Some("a"));
    let p = &t.presentation;
    let uu = p.multiply(&t.u, &t.u).unwrap();
    assert_eq!(uu, p.multiply(&t.euler_eta, &t.u).unwrap());
    for ui in &t.u_i {
        let sq = p.multiply(ui, ui).unwrap();
        assert_eq!(sq, p.multiply(&t.euler_xi_ddot, ui).unwrap());
    }
    // e(xi'')^2 = e(eta)^2 because u(u - e(eta)) = 0.
    let x2 = p.multiply(&t.euler_xi_ddot, &t.euler_xi_ddot).unwrap();
    assert_eq!(x2, p.multiply(&t.euler_eta, &t.euler_eta).unwrap());
    assert_eq!(p.degree_of(&t.euler_xi_ddot), ElementDegree::Homogeneous(2));
}

#[test]
fn tower_with_zero_euler_class() {
    let t = cp2_tower(3, 2, None);
    assert_eq!(t.presentation.poincare_series(8).unwrap(), vec![1, 0, 3, 0, 4, 0, 3, 0, 1]);
    let uu = t.presentation.multiply(&t.u, &t.u).unwrap();
    assert!(uu.is_zero());
}

#[test]
fn even_rank_tower_is_exterior() {
    let t = build_sphere_bundle_tower(&SphereBundleTowerSpec::new(point(), point().zero(), 2, 2).unwrap()).unwrap();
    assert_eq!(t.presentation.poincare_series(3).unwrap(), vec![1, 2, 1, 0]);
    assert!(t.euler_xi_ddot.is_zero());
}

#[test]
fn euler_class_degree_is_checked() {
    let base = complex_projective(2).unwrap();
    let aa = base.parse("a*a").unwrap();
    assert!(matches!(
        SphereBundleTowerSpec::new(base.clone(), aa, 3, 2),
        Err(PresentationError::EulerDegree { expected: 2, .. })
    ));
    let s3 = sphere(3).unwrap();
    let s = s3.generator("s").unwrap();
    assert_eq!(SphereBundleTowerSpec::new(s3, s, 4, 2).unwrap_err(), PresentationError::OddEulerClass(3));
}

#[test]
fn tensor_products_and_embeddings() {
    let b = parse_base("cp2xs3").unwrap();
    assert_eq!(b.poincare_series(8).unwrap(), vec![1, 0, 1, 1, 1, 1, 0, 1, 0]);
    let cp = complex_projective(2).unwrap();
    let two = tensor_product(&[cp.clone(), cp.clone()]).unwrap();
    assert_eq!(two.generators().len(), 2);
    assert_ne!(two.generators()[0].id, two.generators()[1].id);
    let a2 = cp.parse("a*a").unwrap();
    let img = embed(&cp, &a2, &b, str::to_string).unwrap();
    assert_eq!(img, b.parse("a*a").unwrap());
}

#[test]
fn catalog_names_resolve() {
    assert_eq!(from_name("conf:d=2,k=3").unwrap().poincare_series(2).unwrap(), vec![1, 3, 2]);
    assert_eq!(from_name("fn:d=2,m=2,n=1,r=2").unwrap().generators().len(), 5);
    assert_eq!(from_name("sb:base=cp2,q=3,r=2").unwrap().generators().len(), 3);
    assert_eq!(from_name("cp:n=3").unwrap().top_degree(10).unwrap(), Some(6));
    assert_eq!(from_name("sphere:k=2").unwrap().poincare_series(3).unwrap(), vec![1, 0, 1, 0]);
    assert_eq!(from_name("pt").unwrap().generators().len(), 0);
    assert!(matches!(from_name("torus:g=2"), Err(PresentationError::UnknownName(_))));
    assert!(matches!(from_name("conf:d=2"), Err(PresentationError::UnknownName(_))));
    let t = sphere_bundle_from_name("sb:base=cp2,q=3,r=2,e=-a").unwrap();
    assert_eq!(t.euler_eta, t.presentation.parse("-a").unwrap());
}

#[test]
fn shipped_names_resolve_and_are_confluent() {
    let names = shipped_names();
    assert_eq!(names.len(), 42);
    for name in names {
        let p = from_name(&name).unwrap();
        assert!(p.check_confluence().passed(), "{name}");
    }
}
