//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use dpcolor::coloring::{chromatic_polynomial_eval, coloring_number};
use dpcolor::cover::{canonical_cover, gauge_normalize, Cover, Matching};
use dpcolor::dp::{
    chi_dp, find_bad_full_cover, is_robustly_critical, p_dp, product_upper_bound, unrank_permutation, FullCoverSpace,
};
use dpcolor::graph::{cartesian_product, complete, complete_bipartite, cycle, path, SimpleGraph};
use dpcolor::product::certificate::STATUS_BAD;
use dpcolor::product::random::block_covers_all;
use dpcolor::product::{
    build_random_bad_cover, build_star_bad_cover, c_bound_check, c_constant, check_volatile, count_volatile,
    f_dp_bracket, shift_classes, star_product_cover, verify_bad_by_volatility, volatility_probability,
    HypothesisChecks, ProbabilityMethod, ProbabilityResult, ProductCover, XColoring,
};
use dpcolor::solver::{count_transversals, enumerate_transversals, find_transversal};
use dpcolor::{Error, Limits, Mode};
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn lim() -> Limits {
    Limits::default()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn count(c: &Cover) -> BigUint {
    count_transversals(c, &lim()).unwrap()
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn criterion_1() -> Outcome {
    let c4 = cycle(4).map_err(err)?;
    let space = FullCoverSpace::new(&c4, 3, &lim()).map_err(err)?;
    ensure!(space.total() == 6, "expected 6 gauge classes, got {}", space.total());
    let v = p_dp(&c4, 3, &lim()).map_err(err)?;
    ensure!(v == BigUint::from(15u32), "P_DP(C4,3) = {v}");
    Ok("P_DP(C4,3) = 15 over 6 gauge classes".into())
}

fn criterion_2() -> Outcome {
    let c3 = cycle(3).map_err(err)?;
    let v = p_dp(&c3, 3, &lim()).map_err(err)?;
    ensure!(v == BigUint::from(6u32), "P_DP(C3,3) = {v}");
    let bracket = f_dp_bracket(&c3, 3, &lim()).map_err(err)?;
    ensure!(
        bracket.lower == rational(2, 1) && bracket.upper == rational(2, 1),
        "bracket ({}, {})",
        bracket.lower,
        bracket.upper
    );
    let prism = cartesian_product(&c3, &complete_bipartite(1, 1).map_err(err)?);
    ensure!(prism.cyclomatic_number() == 4, "prism cyclomatic number {}", prism.cyclomatic_number());
    let space = FullCoverSpace::new(&prism, 3, &lim()).map_err(err)?;
    ensure!(space.total() == 1296, "prism has {} gauge classes", space.total());
    ensure!(find_bad_full_cover(&prism, 3, &lim()).map_err(err)?.is_none(), "prism has a bad 3-fold cover");
    let star = build_star_bad_cover(&c3, 3, 2, HypothesisChecks::default(), &lim()).map_err(err)?;
    ensure!(star.verdict.bad, "star(C3, 3, 2) is not bad");
    Ok("P_DP(C3,3) = 6, bracket (2,2), prism colourable over 1296 classes, t = 2 bad: f_DP(C3,1) = 2".into())
}

fn criterion_3() -> Outcome {
    let c = c_constant(3, 2).map_err(err)?;
    ensure!(c == 2, "c(3,2) = {c}");
    for k in 2..=6 {
        for l in 2..=6 {
            ensure!(c_bound_check(k, l).map_err(err)?, "bound check fails at k = {k}, l = {l}");
        }
    }
    Ok("c(3,2) = 2; bound holds on [2,6]²".into())
}

/// K3 □ K_{2,1} with both crosses `a ↦ shift_of(class, u, a)`.
fn shifted_pair_cover(class: usize) -> Result<(ProductCover, dpcolor::product::ShiftClasses), String> {
    let k3 = complete(3).map_err(err)?;
    let classes = shift_classes(&k3, 4, &lim()).map_err(err)?;
    let pc = ProductCover::build(&k3, 2, 1, 4, |u, _j, _q| {
        let perm: Vec<usize> = (0..4).map(|a| classes.shift_of(class, u, a)).collect();
        Matching::from_permutation(&perm)
    })
    .map_err(err)?;
    Ok((pc, classes))
}

fn criterion_4() -> Outcome {
    let formula = volatility_probability(3, 2, ProbabilityMethod::Formula).map_err(err)?;
    let exact = volatility_probability(3, 2, ProbabilityMethod::Exact).map_err(err)?;
    let three_quarters = ProbabilityResult::Exact(rational(3, 4));
    ensure!(formula == three_quarters, "formula gave {formula:?}");
    ensure!(exact == three_quarters, "brute force gave {exact:?}");

    // Independent brute force: s = (s1, s2) is volatile iff π1(s1) ≠ π2(s2).
    let mut volatile = 0u64;
    for r1 in 0..24 {
        let p1 = unrank_permutation(4, r1);
        for r2 in 0..24 {
            let p2 = unrank_permutation(4, r2);
            volatile += (0..4).map(|s1| (0..4).filter(|&s2| p1[s1] != p2[s2]).count() as u64).sum::<u64>();
        }
    }
    ensure!(volatile * 4 == 3 * 576 * 16, "oracle count {volatile} over 576 tuples");

    let mc = volatility_probability(3, 2, ProbabilityMethod::MonteCarlo { samples: 100_000, seed: 2024 })
        .map_err(err)?
        .to_f64();
    ensure!((mc - 0.75).abs() <= 0.02, "Monte Carlo estimate {mc}");

    let (pc, classes) = shifted_pair_cover(1)?;
    for j in 0..2 {
        let pairs: usize = (0..3).map(|u| pc.cross(u, j, 0).pair_count()).sum();
        ensure!(pairs == 12, "cross {j} has {pairs} pairs");
    }
    let members = classes.members(1);
    let mut volatile_elements = 0;
    for (s1, a) in members.iter().enumerate() {
        for (s2, b) in members.iter().enumerate() {
            let report = check_volatile(&pc, &XColoring::from_colorings(&[a, b]), 0, &lim()).map_err(err)?;
            let tau = if s1 == s2 { 1 } else { 2 };
            ensure!(report.tau == Some(tau), "({s1},{s2}): tau {:?}", report.tau);
            ensure!(report.volatile == (tau == 2), "({s1},{s2}): volatile {}", report.volatile);
            volatile_elements += usize::from(report.volatile);
        }
    }
    ensure!(volatile_elements == 12, "{volatile_elements} of 16 volatile");
    Ok(format!("3/4 by formula and by 576 tuples; Monte Carlo {mc:.4}; 12 of 16 volatile"))
}

fn criterion_5() -> Outcome {
    let reduced_only = Limits { covers: 2_000_000, ..lim() };
    let mut notes = Vec::new();
    for (name, g, k) in [
        ("K2", complete(2).map_err(err)?, 2),
        ("K3", complete(3).map_err(err)?, 3),
        ("C5", cycle(5).map_err(err)?, 3),
        ("C7", cycle(7).map_err(err)?, 3),
        ("K4", complete(4).map_err(err)?, 4),
    ] {
        let r = is_robustly_critical(&g, k, Mode::Reduced, &lim()).map_err(err)?;
        ensure!(r.robust, "{name} not robustly {k}-critical (reduced)");
        match is_robustly_critical(&g, k, Mode::Oracle, &reduced_only) {
            Ok(o) => {
                ensure!(o.robust, "{name} not robustly {k}-critical (oracle)");
                notes.push(format!("{name} both modes"));
            }
            Err(Error::CapExceeded { .. }) => notes.push(format!("{name} reduced")),
            Err(e) => return Err(e.to_string()),
        }
    }
    let mut compared = 0;
    for n in 1..=5 {
        for g in connected_graphs_up_to_iso(n) {
            for k in [2, 3] {
                let r = is_robustly_critical(&g, k, Mode::Reduced, &lim()).map_err(err)?;
                let o = is_robustly_critical(&g, k, Mode::Oracle, &lim()).map_err(err)?;
                ensure!(r.robust == o.robust, "modes disagree on {} at k = {k}", dpcolor::format::to_graph6(&g));
                compared += 1;
            }
        }
    }
    Ok(format!("{}; modes agree on {compared} (graph, k) pairs", notes.join(", ")))
}

fn criterion_6() -> Outcome {
    let c5 = cycle(5).map_err(err)?;
    let star = build_star_bad_cover(&c5, 3, 10, HypothesisChecks::default(), &lim()).map_err(err)?;
    ensure!(star.verdict.bad, "star(C5, 3, 10) not bad");
    ensure!(star.verdict.x_colorings == 30, "{} X-colourings", star.verdict.x_colorings);
    ensure!(star.product.layout().t == 10, "{} leaves", star.product.layout().t);
    let report = star.certificate.verify(&lim()).map_err(err)?;
    ensure!(report.bad && report.status == STATUS_BAD && report.status_matches, "certificate re-check failed");
    let star_graph = complete_bipartite(1, 10).map_err(err)?;
    let (xg, cg) = (chi_dp(&c5, &lim()).map_err(err)?, coloring_number(&c5).0);
    let (xh, ch) = (chi_dp(&star_graph, &lim()).map_err(err)?, coloring_number(&star_graph).0);
    let upper = product_upper_bound(xg, cg, xh, ch).map_err(err)?;
    ensure!(upper == 4, "product upper bound {upper}");
    Ok("bad 3-fold cover over 30 colourings × 10 leaves; upper bound 4, so χ_DP(C5 □ K_{1,10}) = 4".into())
}

/// Attempts succeed iff every `(s1, s2)` is volatile for one of the two leaves.
fn block_success_oracle() -> (u64, u64) {
    let perms: Vec<Vec<usize>> = (0..24).map(|r| unrank_permutation(4, r)).collect();
    let mut hits = 0;
    let mut total = 0;
    for a in &perms {
        for b in &perms {
            for c in &perms {
                for d in &perms {
                    // leaf 0 uses (a, b), leaf 1 uses (c, d)
                    let ok = (0..4).all(|s1| (0..4).all(|s2| a[s1] != b[s2] || c[s1] != d[s2]));
                    hits += u64::from(ok);
                    total += 1;
                }
            }
        }
    }
    (hits, total)
}

fn criterion_7() -> Outcome {
    let (hits, total) = block_success_oracle();
    ensure!(total == 331_776, "{total} tuples");
    ensure!(hits * 8 == total * 3, "oracle block success {hits}/{total}");
    let exact = hits as f64 / total as f64;

    // The library's block test agrees with the oracle on a sweep of tuples.
    let perms: Vec<Vec<usize>> = (0..24).map(|r| unrank_permutation(4, r)).collect();
    for (i, a) in perms.iter().enumerate() {
        for c in &perms {
            let (b, d) = (&perms[(i * 7) % 24], &perms[(i * 5 + 3) % 24]);
            let sigma = vec![vec![a.clone(), c.clone()], vec![b.clone(), d.clone()]];
            let want = (0..4).all(|s1| (0..4).all(|s2| a[s1] != b[s2] || c[s1] != d[s2]));
            ensure!(block_covers_all(&sigma, 4) == want, "block test disagrees with the oracle");
        }
    }

    let k3 = complete(3).map_err(err)?;
    let mut resamples = Vec::new();
    let (mut accepted, mut attempts) = (0u64, 0u64);
    for seed in 0..20u64 {
        let out = build_random_bad_cover(&k3, 3, 2, 72, seed, HypothesisChecks::default(), &lim()).map_err(err)?;
        ensure!(out.verdict.bad, "seed {seed}: not bad");
        ensure!(out.verdict.x_colorings == 576, "seed {seed}: {} X-colourings", out.verdict.x_colorings);
        ensure!(out.attempts.len() == 36, "seed {seed}: {} blocks", out.attempts.len());
        accepted += out.attempts.len() as u64;
        attempts += out.attempts.iter().map(|&a| u64::from(a)).sum::<u64>();
        resamples.push(out.resamples());
    }
    resamples.sort_unstable();
    let median = (resamples[9] + resamples[10]) as f64 / 2.0;
    let pooled = accepted as f64 / attempts as f64;
    let from_median = 36.0 / (36.0 + median);
    ensure!((pooled - exact).abs() <= 0.1, "pooled success rate {pooled:.3} vs {exact:.3}");
    ensure!((from_median - exact).abs() <= 0.1, "median-based rate {from_median:.3} vs {exact:.3}");

    match build_random_bad_cover(&k3, 3, 2, 71, 0, HypothesisChecks::default(), &lim()) {
        Err(Error::Precondition(m)) if m.contains("threshold") => {}
        other => return Err(format!("t = 71 should fail the threshold, got {:?}", other.map(|o| o.verdict))),
    }
    Ok(format!(
        "exact block success 3/8; pooled {pooled:.3}, median resamples {median} → {from_median:.3}; t = 71 rejected"
    ))
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn volatile_bound(g: &SimpleGraph) -> Result<(), String> {
    let m = cartesian_product(g, &complete_bipartite(1, 2).map_err(err)?);
    let g = g.clone();
    run_property(500, cover_strategy(m, 3), move |c| {
        let pc = ProductCover::from_cover(&g, 1, 2, c).unwrap();
        for q in 0..2 {
            prop_assert!(count_volatile(&pc, q, &lim()).unwrap() <= 3);
        }
        Ok(())
    })
}

fn criterion_8() -> Outcome {
    run_property(200, graph_and_cover(6, 3), |c| {
        let before = count(&c);
        let transversals = enumerate_transversals(&c, &lim()).unwrap();
        for e in 0..c.base().edge_count() {
            for (a, _) in c.matching(e).pairs() {
                let smaller = c.without_pair(e, a);
                prop_assert!(count(&smaller) >= before);
                prop_assert!(transversals.iter().all(|t| t.is_valid_for(&smaller)));
            }
        }
        Ok(())
    })
    .map_err(|e| format!("monotonicity: {e}"))?;

    let relabeled = (connected_graph_strategy(6), 1usize..=3)
        .prop_flat_map(|(g, k)| full_cover_strategy(g, k))
        .prop_flat_map(|c| {
            let k = c.uniform_fold().unwrap();
            let kf: u64 = (1..=k as u64).product();
            let n = c.base().n();
            (Just(c), prop::collection::vec(0..kf, n))
        });
    run_property(200, relabeled, |(c, ranks)| {
        let k = c.uniform_fold().unwrap();
        let relabel: Vec<Vec<usize>> = ranks.iter().map(|&r| unrank_permutation(k, r)).collect();
        let moved = c.relabeled(&relabel);
        let (normal, _) = gauge_normalize(&moved).unwrap();
        prop_assert_eq!(count(&moved), count(&c));
        prop_assert_eq!(count(&normal), count(&c));
        Ok(())
    })
    .map_err(|e| format!("gauge invariance: {e}"))?;

    run_property(200, (graph_strategy(6), 1usize..=4), |(g, k)| {
        prop_assert_eq!(count(&canonical_cover(&g, k)), BigUint::from(naive_chromatic_count(&g, k)));
        Ok(())
    })
    .map_err(|e| format!("canonical count: {e}"))?;

    volatile_bound(&cycle(5).map_err(err)?).map_err(|e| format!("volatile bound on C5: {e}"))?;
    volatile_bound(&cycle(7).map_err(err)?).map_err(|e| format!("volatile bound on C7: {e}"))?;

    let mut constructed = Vec::new();
    for (g, k) in [(complete(2).map_err(err)?, 2), (cycle(3).map_err(err)?, 3), (cycle(5).map_err(err)?, 3)] {
        let p: usize = chromatic_polynomial_eval(&g, k, &lim()).map_err(err)?.try_into().map_err(err)?;
        for t in 1..=p / k + 1 {
            constructed.push(star_product_cover(&g, k, t, &lim()).map_err(err)?.0);
        }
    }
    let k3 = complete(3).map_err(err)?;
    for seed in 0..3 {
        let out = build_random_bad_cover(&k3, 3, 2, 72, seed, HypothesisChecks::default(), &lim()).map_err(err)?;
        constructed.push(out.product);
    }
    let mut agreed = 0;
    for pc in &constructed {
        let verdict = verify_bad_by_volatility(pc, &lim()).map_err(err)?;
        if verdict.x_colorings > 600 {
            continue;
        }
        let direct = find_transversal(pc.cover(), &lim()).map_err(err)?;
        ensure!(verdict.bad == direct.is_none(), "volatility verdict disagrees with direct solving");
        agreed += 1;
    }
    Ok(format!("200 + 200 + 200 cases, 2 × 500 product covers, {agreed} constructed covers agree"))
}

fn criterion_9() -> Outcome {
    for (name, g, want) in [
        ("C4", cycle(4).map_err(err)?, 3),
        ("C5", cycle(5).map_err(err)?, 3),
        ("K4", complete(4).map_err(err)?, 4),
        ("P4", path(4).map_err(err)?, 2),
    ] {
        let got = chi_dp(&g, &lim()).map_err(err)?;
        ensure!(got == want, "χ_DP({name}) = {got}, expected {want}");
    }
    Ok("χ_DP: C4 = 3, C5 = 3, K4 = 4, P4 = 2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "DP colour function of C4", Duration::from_secs(1), criterion_1),
        (2, "threshold for C3 with one centre", Duration::from_secs(30), criterion_2),
        (3, "resampling constant", Duration::from_secs(1), criterion_3),
        (4, "volatility probability", Duration::from_secs(5), criterion_4),
        (5, "robust criticality", Duration::from_secs(300), criterion_5),
        (6, "star construction on C5", Duration::from_secs(10), criterion_6),
        (7, "randomised construction on K3", Duration::from_secs(120), criterion_7),
        (8, "property suites", Duration::from_secs(600), criterion_8),
        (9, "DP chromatic numbers", Duration::from_secs(60), criterion_9),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{elapsed:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id} ({name}): {why} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
