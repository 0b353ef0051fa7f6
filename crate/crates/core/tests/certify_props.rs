mod common;

use common::{x, y};
use num_traits::Signed;
use proptest::prelude::*;
use regulous_core::certify::negative_sample;
use regulous_core::resolve::continuity_at;
use regulous_core::{
    bad_point_step, bad_set, certify_nonnegative, local_positive_definiteness, product_of_sos, reduce_fraction,
    verify_certificate, zero_set_2d, PipelineState, Point, Poly2, Rat, RatFunc, SosRep,
};

fn poly(max_deg: u32) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -3i64..=3), 1..4).prop_map(move |ts| {
        let ts: Vec<(u32, u32, i64)> = ts.into_iter().filter(|(i, j, _)| i + j <= max_deg).collect();
        Poly2::from_int_terms(&ts)
    })
}

fn sum_sq(ts: &[Poly2]) -> Poly2 {
    ts.iter().fold(Poly2::zero(), |acc, t| &acc + &(t * t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn product_identity(xs in prop::collection::vec(poly(2), 0..5), ys in prop::collection::vec(poly(2), 0..5)) {
        let out = product_of_sos(&xs, &ys);
        prop_assert_eq!(sum_sq(&out), &sum_sq(&xs) * &sum_sq(&ys));
        prop_assert!(out.iter().all(|t| !t.is_zero()));
    }
}

/// Terms vanishing to order at least two at `a`.
fn higher_order(a: &Point, k: [i64; 3]) -> Poly2 {
    let u = &x() - &Poly2::constant(a.x.clone());
    let v = &y() - &Poly2::constant(a.y.clone());
    &(&(&u * &u).scale(&Rat::from_integer(k[0].into())) + &(&u * &v).scale(&Rat::from_integer(k[1].into())))
        + &(&v * &v).scale(&Rat::from_integer(k[2].into()))
}

/// `q`-terms with a single zero at `a` and lowest form `(x-a)^2 + (y-b)^2`,
/// and `p`-terms with a proportional lowest form.
fn instance(a: Point, kq: [i64; 3], kp: [i64; 6], scale: i64) -> (RatFunc, SosRep, SosRep) {
    let u = &x() - &Poly2::constant(a.x.clone());
    let v = &y() - &Poly2::constant(a.y.clone());
    let qt = vec![&u + &higher_order(&a, kq), v.clone()];
    let s = Rat::from_integer(scale.into());
    let pt = vec![
        &(&u + &v).scale(&s) + &higher_order(&a, [kp[0], kp[1], kp[2]]),
        &(&u - &v).scale(&s) + &higher_order(&a, [kp[3], kp[4], kp[5]]),
    ];
    let f = reduce_fraction(&sum_sq(&pt), &sum_sq(&qt)).unwrap();
    (f, SosRep::unit(pt), SosRep::unit(qt))
}

fn check_step(f: &RatFunc, before: &PipelineState, after: &PipelineState, a: &Point) -> Result<(), TestCaseError> {
    prop_assert_eq!(reduce_fraction(&after.p, &after.q).unwrap(), f.clone());
    prop_assert_eq!(sum_sq(&after.q_rep.terms).scale(&after.q_rep.scalar), after.q.clone());
    prop_assert_eq!(sum_sq(&after.p_rep.terms).scale(&after.p_rep.scalar), after.p.clone());
    let mut expected = before.bad.clone();
    expected.retain(|b| b != a);
    prop_assert_eq!(bad_set(f, &after.q, &after.d).unwrap(), expected);
    for t in after.p_rep.terms.iter().chain(&after.q_rep.terms) {
        let g = reduce_fraction(t, &after.d).unwrap();
        for e in &after.eliminated {
            prop_assert!(continuity_at(&g, e).unwrap().is_continuous(), "{} at {}", g, e);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pipeline_steps_keep_their_postconditions(
        a in (-1i64..=1, -1i64..=1),
        kq in prop::array::uniform3(-1i64..=1),
        kp in prop::array::uniform6(-1i64..=1),
        scale in 1i64..=2,
    ) {
        let a = Point::from_ints(a.0, a.1);
        let (f, p, q) = instance(a.clone(), kq, kp, scale);
        let z = zero_set_2d(&q.expand()).unwrap();
        prop_assume!(z.finite && z.points == vec![a.clone()]);
        prop_assume!(negative_sample(&f).is_none());
        let mut state = PipelineState::new(&f, p.clone(), q.clone()).unwrap();
        while let Some(b) = state.bad.first().cloned() {
            let lp = local_positive_definiteness(&state.p, &b).unwrap();
            prop_assert!(lp.is_positive_definite());
            let (next, trace) = bad_point_step(&f, &state, &b).unwrap();
            prop_assert_eq!(trace.p_lowest.clone(), trace.q_lowest.scale(&trace.f_value));
            check_step(&f, &state, &next, &b)?;
            state = next;
        }
        let cert = certify_nonnegative(&f, &p, &q).unwrap();
        prop_assert!(verify_certificate(&cert).passed);
        for i in -20..=20i64 {
            for j in -20..=20i64 {
                let pt = Point::new(Rat::new(i.into(), 10.into()), Rat::new(j.into(), 10.into()));
                if let Some(v) = cert.target.evaluate(&pt) {
                    prop_assert!(!v.is_negative());
                }
            }
        }
    }
}

#[test]
fn two_bad_points() {
    let a = Point::origin();
    let b = Point::from_ints(1, 0);
    let (_, pa, qa) = instance(a, [0, 1, 0], [0, 0, 1, 1, 0, 0], 1);
    let (_, pb, qb) = instance(b, [0, 0, 1], [0, 0, 0, 0, 1, 0], 1);
    let pt = product_of_sos(&pa.terms, &pb.terms);
    let qt = product_of_sos(&qa.terms, &qb.terms);
    let f = reduce_fraction(&sum_sq(&pt), &sum_sq(&qt)).unwrap();
    let cert = certify_nonnegative(&f, &SosRep::unit(pt), &SosRep::unit(qt)).unwrap();
    assert_eq!(cert.provenance.eliminated_points, vec![Point::origin(), Point::from_ints(1, 0)]);
    assert_eq!(cert.provenance.step_traces.len(), 2);
    assert!(verify_certificate(&cert).passed);
    let sum = cert.terms.iter().fold(RatFunc::zero(), |acc, t| &acc + &(t * t));
    assert_eq!(sum, f);
}
