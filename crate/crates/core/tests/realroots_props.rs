use proptest::prelude::*;
use regulous_core::realroots::Span;
use regulous_core::{definiteness_of_form, rat, sturm_count, zero_set_2d, Definiteness, Point, Poly1, Poly2, Rat};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

/// `t^2 + b t + c` with `b^2 < 4c`.
fn irreducible_quadratic() -> impl Strategy<Value = Poly1> {
    (-4i64..=4, 1i64..=6).prop_filter_map("irreducible", |(b, c)| (b * b < 4 * c).then(|| Poly1::from_ints(&[c, b, 1])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn sturm_counts_match_factored_products(
        roots in prop::collection::vec((small_rat(), 1usize..=2), 0..5),
        quads in prop::collection::vec(irreducible_quadratic(), 0..3),
        lo in small_rat(),
        width in (0i64..=16, 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into())),
        scale in prop::sample::select(vec![1i64, -2, 3]),
    ) {
        let hi = &lo + &width;
        let mut p = Poly1::constant(rat(scale));
        for (r, mult) in &roots {
            p = &p * &Poly1::new(vec![-r.clone(), rat(1)]).pow(*mult as u32);
        }
        for q in &quads {
            p = &p * q;
        }
        let mut distinct: Vec<Rat> = roots.iter().map(|(r, _)| r.clone()).collect();
        distinct.sort();
        distinct.dedup();
        let closed = distinct.iter().filter(|r| **r >= lo && **r <= hi).count();
        let open = distinct.iter().filter(|r| **r > lo && **r < hi).count();
        prop_assert_eq!(sturm_count(&p, &Span::closed(lo.clone(), hi.clone())).unwrap(), closed);
        if lo < hi {
            prop_assert_eq!(sturm_count(&p, &Span::open(lo.clone(), hi.clone())).unwrap(), open);
        }
        prop_assert_eq!(sturm_count(&p, &Span::all()).unwrap(), distinct.len());
    }
}

fn x() -> Poly2 {
    Poly2::x()
}
fn y() -> Poly2 {
    Poly2::y()
}

/// `a x^2 + b x y + c y^2` with `b^2 < 4 a c`, `a > 0`.
fn definite_quadratic() -> impl Strategy<Value = Poly2> {
    (1i64..=4, -5i64..=5, 1i64..=4)
        .prop_filter("definite", |(a, b, c)| b * b < 4 * a * c)
        .prop_map(|(a, b, c)| Poly2::from_int_terms(&[(2, 0, a), (1, 1, b), (0, 2, c)]))
}

/// Linear forms and quadratics with real roots.
fn indefinite_factor() -> impl Strategy<Value = Poly2> {
    prop_oneof![
        (-3i64..=3, -3i64..=3).prop_filter("nonzero", |(a, b)| (*a, *b) != (0, 0)).prop_map(|(a, b)| Poly2::from_int_terms(&[(1, 0, a), (0, 1, b)])),
        (-3i64..=3, -5i64..=5, -3i64..=3)
            .prop_filter("real roots", |(a, b, c)| b * b >= 4 * a * c && (*a, *b, *c) != (0, 0, 0))
            .prop_map(|(a, b, c)| Poly2::from_int_terms(&[(2, 0, a), (1, 1, b), (0, 2, c)])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn products_are_definite_iff_factors_are(
        defs in prop::collection::vec(definite_quadratic(), 1..4),
        bad in prop::option::of(indefinite_factor()),
        negate in any::<bool>(),
    ) {
        let mut h = defs.iter().fold(Poly2::one(), |acc, q| &acc * q);
        if negate {
            h = -h;
        }
        let v = definiteness_of_form(&h).unwrap();
        let expected = if negate { Definiteness::NegativeDefinite } else { Definiteness::PositiveDefinite };
        prop_assert_eq!(v.status, expected);
        if let Some(b) = bad {
            let v = definiteness_of_form(&(&h * &b)).unwrap();
            prop_assert!(!v.is_definite());
        }
    }

    #[test]
    fn positive_definite_forms_have_even_degree(
        coeffs in prop::collection::vec(-3i64..=3, 2..6),
    ) {
        let d = coeffs.len() as u32 - 1;
        let terms: Vec<(u32, u32, i64)> = coeffs.iter().enumerate().map(|(i, c)| (d - i as u32, i as u32, *c)).collect();
        let h = Poly2::from_int_terms(&terms);
        prop_assume!(!h.is_zero());
        if definiteness_of_form(&h).unwrap().status == Definiteness::PositiveDefinite {
            prop_assert_eq!(d % 2, 0);
        }
    }
}

fn poly(max_deg: u32) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -3i64..=3), 1..4).prop_map(move |ts| {
        let ts: Vec<(u32, u32, i64)> = ts.into_iter().filter(|(i, j, _)| i + j <= max_deg).collect();
        Poly2::from_int_terms(&ts)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_set_finds_forced_zero(
        gs in prop::collection::vec(poly(2), 2..4),
        a in (-2i64..=2, -2i64..=2),
    ) {
        let a = Point::from_ints(a.0, a.1);
        let gs: Vec<Poly2> = gs.iter().map(|g| g - &Poly2::constant(g.evaluate(&a))).filter(|g| !g.is_zero()).collect();
        prop_assume!(!gs.is_empty());
        let q = gs.iter().fold(Poly2::zero(), |acc, g| &acc + &(g * g));
        let z = zero_set_2d(&q).unwrap();
        if z.finite {
            prop_assert!(z.points.contains(&a), "{} misses {}", q, a);
            for b in &z.points {
                prop_assert_eq!(q.evaluate(b), rat(0));
            }
        } else {
            prop_assert!(z.infinite_witness.is_some());
        }
    }
}

#[test]
fn two_circles_of_radius_zero() {
    let q1 = &(&x() - &Poly2::constant(rat(1))).pow(2) + &y().pow(2);
    let q2 = &x().pow(2) + &(&y() + &Poly2::constant(rat(2))).pow(2);
    let z = zero_set_2d(&(&q1 * &q2)).unwrap();
    assert_eq!(z.points, vec![Point::from_ints(0, -2), Point::from_ints(1, 0)]);
}
