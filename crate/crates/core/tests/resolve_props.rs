mod common;

use common::{corpus, rf};
use regulous_core::ratfunc::derivative_rf;
use regulous_core::resolve::ResolutionNode;
use regulous_core::{one_blowup_criterion, resolve, Point, Rat, RatFunc, Var, Verdict};

fn sample_points() -> Vec<Point> {
    // 50 rational points with nonzero coordinates
    let mut out = Vec::new();
    for i in 1..=10i64 {
        for (a, b) in [(1, 3), (-2, 5), (3, -7), (-5, -2), (7, 4)] {
            out.push(Point::new(Rat::new((a * i).into(), 6.into()), Rat::new(b.into(), (i + 1).into())));
        }
    }
    out
}

#[test]
fn charts_agree_with_the_function() {
    let pts = sample_points();
    for (name, f, _) in corpus() {
        let report = resolve(&f, 32).unwrap();
        let mut nodes: Vec<&ResolutionNode> = Vec::new();
        for root in &report.tree {
            root.walk(&mut nodes);
        }
        let mut checked = 0;
        for node in nodes {
            for chart in &node.charts {
                for p in &pts {
                    if chart.on_exceptional_line(p) {
                        continue;
                    }
                    let image = chart.push_forward(p);
                    if let (Some(a), Some(b)) = (chart.local_fn.evaluate(p), f.evaluate(&image)) {
                        assert_eq!(a, b, "{name}: chart value at {p} vs f at {image}");
                        checked += 1;
                    }
                }
            }
        }
        if report.stages > 0 {
            assert!(checked > 0, "{name}: no chart point checked");
        }
    }
}

#[test]
fn stage_counts_match_the_corpus() {
    for (name, f, stages) in corpus() {
        let report = resolve(&f, 32).unwrap();
        match stages {
            Some(s) => {
                assert_eq!(report.verdict, Verdict::Regulous, "{name}");
                assert_eq!(report.stages, s, "{name}");
            }
            None => assert_eq!(report.verdict, Verdict::NotRegulous, "{name}"),
        }
    }
}

#[test]
fn one_blowup_criterion_matches_stage_count() {
    let mut disagreements = Vec::new();
    for (name, f, stages) in corpus() {
        if stages.is_none() {
            continue;
        }
        let by_stages = resolve(&f, 32).unwrap().stages <= 1;
        let (by_criterion, _) = one_blowup_criterion(&f).unwrap();
        if by_stages != by_criterion {
            disagreements.push(name);
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

fn one_blowup_members() -> Vec<(&'static str, RatFunc)> {
    corpus().into_iter().filter(|(_, _, s)| matches!(s, Some(0 | 1))).map(|(n, f, _)| (n, f)).collect()
}

#[test]
fn one_blowup_functions_form_a_ring() {
    let fs = one_blowup_members();
    for (i, (n1, f)) in fs.iter().enumerate() {
        for (n2, g) in fs.iter().skip(i).take(3) {
            for h in [f * g, f + g] {
                let r = resolve(&h, 32).unwrap();
                assert_eq!(r.verdict, Verdict::Regulous, "{n1} and {n2}");
                assert!(r.stages <= 1, "{n1} and {n2}: {} stages", r.stages);
            }
        }
    }
}

#[test]
fn derivatives_of_c1_members_stay_in_the_class() {
    let f = rf(&common::x().pow(6), &common::sq(&common::r2()));
    let d = derivative_rf(&f, Var::X);
    assert!(one_blowup_criterion(&d).unwrap().0);
    let g = rf(&common::x().pow(4), &common::r2());
    assert!(one_blowup_criterion(&derivative_rf(&g, Var::X)).unwrap().0);
}
