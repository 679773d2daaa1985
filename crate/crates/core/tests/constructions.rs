mod common;

use common::*;
use dpcolor::coloring::chromatic_polynomial_eval;
use dpcolor::cover::Cover;
use dpcolor::graph::{cartesian_product, complete, complete_bipartite, cycle, SimpleGraph};
use dpcolor::product::{
    build_random_bad_cover, build_star_bad_cover, check_volatile, count_volatile, shift_classes, star_product_cover,
    verify_bad_by_volatility, HypothesisChecks, ProductCover, XColoring,
};
use dpcolor::solver::find_transversal;
use dpcolor::{CoverCertificate, Limits};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn lim() -> Limits {
    Limits::default()
}

/// The volatility verdict agrees with solving the whole product cover.
fn assert_verdict_matches_direct_solve(pc: &ProductCover) {
    let verdict = verify_bad_by_volatility(pc, &lim()).unwrap();
    let direct = find_transversal(pc.cover(), &lim()).unwrap();
    assert_eq!(verdict.bad, direct.is_none());
    if let Some(t) = verdict.counterexample {
        assert!(t.is_valid_for(pc.cover()));
    }
}

fn random_product_covers(g: &SimpleGraph, k: usize, cases: u32) {
    let m = cartesian_product(g, &complete_bipartite(1, 2).unwrap());
    let mut runner = TestRunner::new(Config {
        cases,
        ..Config::default()
    });
    runner
        .run(&cover_strategy(m, k), |c: Cover| {
            let pc = ProductCover::from_cover(g, 1, 2, c).unwrap();
            for q in 0..2 {
                prop_assert!(count_volatile(&pc, q, &lim()).unwrap() <= k as u64);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn volatile_colourings_per_leaf_are_bounded_by_the_fold() {
    random_product_covers(&cycle(5).unwrap(), 3, 500);
    random_product_covers(&cycle(7).unwrap(), 3, 500);
}

#[test]
fn star_pairs_each_leaf_with_exactly_one_class() {
    for (g, k) in [(cycle(3).unwrap(), 3), (cycle(5).unwrap(), 3), (complete(4).unwrap(), 4)] {
        let classes = shift_classes(&g, k, &lim()).unwrap();
        let t = classes.len() + 1;
        let (pc, _) = star_product_cover(&g, k, t, &lim()).unwrap();
        let colorings = pc.x_colorings(&lim()).unwrap();
        assert_eq!(colorings.len(), classes.len() * k);
        for q in 0..t {
            let volatile: Vec<&XColoring> = colorings
                .iter()
                .filter(|ix| check_volatile(&pc, ix, q, &lim()).unwrap().volatile)
                .collect();
            if q < classes.len() {
                let mut expected: Vec<XColoring> =
                    classes.members(q).iter().map(|m| XColoring::from_colorings(&[m])).collect();
                expected.sort();
                let mut got: Vec<XColoring> = volatile.into_iter().cloned().collect();
                got.sort();
                assert_eq!(got, expected, "leaf {q}");
            } else {
                assert!(volatile.is_empty(), "surplus leaf {q}");
            }
        }
    }
}

#[test]
fn few_leaves_leave_the_star_colourable() {
    for (g, k) in [(cycle(3).unwrap(), 3), (cycle(5).unwrap(), 3), (cycle(7).unwrap(), 3)] {
        let p: u64 = chromatic_polynomial_eval(&g, k, &lim()).unwrap().try_into().unwrap();
        for t in 1..=3 {
            let (pc, _) = star_product_cover(&g, k, t, &lim()).unwrap();
            let colorings = pc.x_colorings(&lim()).unwrap().len() as u64;
            assert_eq!(colorings, p);
            if colorings > (k * t) as u64 {
                let tr = find_transversal(pc.cover(), &lim()).unwrap().expect("colourable");
                assert!(tr.is_valid_for(pc.cover()));
            }
        }
    }
}

#[test]
fn volatility_verdict_matches_direct_solving() {
    for (g, k) in [(cycle(3).unwrap(), 3), (cycle(5).unwrap(), 3), (complete(2).unwrap(), 2)] {
        let p: usize = chromatic_polynomial_eval(&g, k, &lim()).unwrap().try_into().unwrap();
        for t in 1..=p / k + 1 {
            let (pc, _) = star_product_cover(&g, k, t, &lim()).unwrap();
            assert_verdict_matches_direct_solve(&pc);
        }
    }
    for seed in [1, 2] {
        let out = build_random_bad_cover(
            &complete(3).unwrap(),
            3,
            2,
            72,
            seed,
            HypothesisChecks::default(),
            &lim(),
        )
        .unwrap();
        assert_verdict_matches_direct_solve(&out.product);
    }
}

#[test]
fn extra_leaves_keep_the_star_bad() {
    let g = cycle(5).unwrap();
    for t in 10..=13 {
        let out = build_star_bad_cover(&g, 3, t, HypothesisChecks::default(), &lim()).unwrap();
        assert!(out.verdict.bad, "t = {t}");
    }
}

#[test]
fn certificates_replay_byte_for_byte() {
    let star = build_star_bad_cover(&cycle(5).unwrap(), 3, 11, HypothesisChecks::default(), &lim()).unwrap();
    let random =
        build_random_bad_cover(&complete(3).unwrap(), 3, 2, 73, 7, HypothesisChecks::default(), &lim()).unwrap();
    for (cert, product) in [(star.certificate, star.product), (random.certificate, random.product)] {
        let text = cert.to_json();
        let back = CoverCertificate::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.replay(&lim()).unwrap(), product);
        let report = back.verify(&lim()).unwrap();
        assert!(report.bad && report.status_matches);
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let star = build_star_bad_cover(&cycle(3).unwrap(), 3, 2, HypothesisChecks::default(), &lim()).unwrap();
    let mut cert = star.certificate.clone();
    cert.matchings[0].map.reverse();
    assert!(cert.replay(&lim()).is_err());
    let mut cert = star.certificate;
    cert.t = 5;
    cert.hash = cert.compute_hash();
    assert!(cert.replay(&lim()).is_err());
}
