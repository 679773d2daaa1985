//! Strategies and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use dpcolor::cover::{Cover, Matching};
use dpcolor::dp::{partial_injections, unrank_permutation};
use dpcolor::graph::SimpleGraph;
use proptest::prelude::*;

/// Graph on `n` vertices from a bit per pair `(i, j)`, `i < j`, in row order.
pub fn graph_from_bits(n: usize, bits: &[bool]) -> SimpleGraph {
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let edges: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, &b)| b).map(|(p, _)| p).collect();
    SimpleGraph::new(n, edges).unwrap()
}

pub fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

pub fn connected_graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    graph_strategy(max_n).prop_filter("connected", SimpleGraph::is_connected)
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// Uniform k-fold covers whose matchings are, with equal odds, a random
/// permutation or a random partial injection.
pub fn cover_strategy(g: SimpleGraph, k: usize) -> impl Strategy<Value = Cover> {
    let options = partial_injections(k);
    let m = g.edge_count();
    let perms = factorial(k);
    prop::collection::vec((any::<bool>(), 0..options.len(), 0..perms), m).prop_map(move |picks| {
        let matchings = picks
            .iter()
            .map(|&(full, i, r)| {
                if full {
                    Matching::from_permutation(&unrank_permutation(k, r as u64))
                } else {
                    options[i].clone()
                }
            })
            .collect();
        Cover::new(g.clone(), vec![k; g.n()], matchings).unwrap()
    })
}

/// Full covers only.
pub fn full_cover_strategy(g: SimpleGraph, k: usize) -> impl Strategy<Value = Cover> {
    let m = g.edge_count();
    prop::collection::vec(0..factorial(k), m).prop_map(move |ranks| {
        let matchings = ranks
            .iter()
            .map(|&r| Matching::from_permutation(&unrank_permutation(k, r as u64)))
            .collect();
        Cover::new(g.clone(), vec![k; g.n()], matchings).unwrap()
    })
}

/// Random graph with at most `max_n` vertices and a random cover with lists of size 1..=max_k.
pub fn graph_and_cover(max_n: usize, max_k: usize) -> impl Strategy<Value = Cover> {
    (graph_strategy(max_n), 1..=max_k).prop_flat_map(|(g, k)| cover_strategy(g, k))
}

/// Generate-and-filter transversal count.
pub fn naive_transversal_count(c: &Cover) -> u64 {
    let g = c.base();
    let n = g.n();
    let folds = c.folds();
    if folds.contains(&0) {
        return 0;
    }
    let mut choice = vec![0usize; n];
    let mut count = 0;
    loop {
        let ok = g
            .edges()
            .iter()
            .zip(c.matchings())
            .all(|(&(u, v), m)| m.forward(choice[u]) != Some(choice[v]));
        count += u64::from(ok);
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            choice[i] += 1;
            if choice[i] < folds[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Number of proper k-colourings by exhaustive listing.
pub fn naive_chromatic_count(g: &SimpleGraph, k: usize) -> u64 {
    let n = g.n();
    if k == 0 {
        return u64::from(n == 0);
    }
    let mut col = vec![0usize; n];
    let mut count = 0;
    loop {
        count += u64::from(g.edges().iter().all(|&(u, v)| col[u] != col[v]));
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            col[i] += 1;
            if col[i] < k {
                break;
            }
            col[i] = 0;
            i += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Adjacency bitmask code minimised over all vertex permutations.
fn canonical_code(g: &SimpleGraph, perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| {
            let mut code = 0u64;
            for &(u, v) in g.edges() {
                let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                code |= 1 << (a * 8 + b);
            }
            code
        })
        .min()
        .unwrap_or(0)
}

/// One representative per isomorphism class of connected graphs on `n` vertices.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<SimpleGraph> {
    let perms = permutations(n);
    let pairs = n * (n - 1) / 2;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs) {
        let bits: Vec<bool> = (0..pairs).map(|i| mask >> i & 1 == 1).collect();
        let g = graph_from_bits(n, &bits);
        if g.is_connected() && seen.insert(canonical_code(&g, &perms)) {
            out.push(g);
        }
    }
    out
}

#[test]
fn connected_graph_census() {
    // OEIS A001349: 1, 1, 2, 6, 21
    let counts: Vec<usize> = (1..=5).map(|n| connected_graphs_up_to_iso(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21]);
}
