mod common;

use common::corpus;
use proptest::prelude::*;
use regulous_core::{
    expansion_criterion, flat_power, one_blowup_criterion, poles, reduce_fraction, regularity_class, resolve, verify_k_flat,
    Poly2, RatFunc, Var,
};

fn poly(max_deg: u32) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -3i64..=3), 1..5).prop_map(move |ts| {
        let ts: Vec<(u32, u32, i64)> = ts.into_iter().filter(|(i, j, _)| i + j <= max_deg).collect();
        Poly2::from_int_terms(&ts)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mixed_partials_commute(p in poly(3), q in poly(2).prop_filter("nonzero", |q| !q.is_zero())) {
        let f = reduce_fraction(&p, &q).unwrap();
        let xy = f.derivative(Var::X).derivative(Var::Y);
        let yx = f.derivative(Var::Y).derivative(Var::X);
        prop_assert_eq!(xy, yx);
    }
}

fn one_blowup_members() -> Vec<(&'static str, RatFunc)> {
    corpus()
        .into_iter()
        .filter(|(_, f, s)| s.is_some() && one_blowup_criterion(f).unwrap().0)
        .map(|(n, f, _)| (n, f))
        .collect()
}

#[test]
fn expansion_criterion_agrees_with_regularity_class() {
    for (name, f) in one_blowup_members() {
        let ps = poles(&f).unwrap().points;
        for k in 0..=3 {
            let report = regularity_class(&f, k).unwrap();
            let by_class = report.max_verified_k.is_some_and(|m| m >= k);
            let by_expansion = ps.iter().all(|a| expansion_criterion(&f, a, k).unwrap().holds);
            assert_eq!(by_class, by_expansion, "{name}, k = {k}");
        }
    }
}

#[test]
fn squares_of_powers_are_flat() {
    for (name, f) in one_blowup_members() {
        if resolve(&f, 32).unwrap().stages > 1 {
            continue;
        }
        for k in 0..=2u32 {
            let m = (2 * k).max(1);
            assert!(verify_k_flat(&f, m, k).unwrap(), "{name}: f^{m} is not {k}-flat");
            if !poles(&f).unwrap().points.is_empty() {
                assert_eq!(flat_power(&f, k).unwrap(), m, "{name}");
            }
        }
    }
}
