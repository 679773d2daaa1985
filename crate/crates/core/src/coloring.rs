//! Classical colouring invariants: coloring number, chromatic number,
//! criticality, and the chromatic polynomial evaluated at an integer.

use std::collections::HashMap;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Limits, Resource, Result};
use crate::graph::SimpleGraph;

/// A proper colouring with colours in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProperColoring {
    pub colors: Vec<usize>,
    pub k: usize,
}

impl ProperColoring {
    pub fn is_proper_for(&self, g: &SimpleGraph) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().all(|&c| c < self.k)
            && g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }
}

struct NodeBudget {
    used: u64,
    cap: u64,
}

impl NodeBudget {
    fn new(cap: u64) -> Self {
        NodeBudget { used: 0, cap }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(Error::CapExceeded {
                resource: Resource::Nodes,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }
}

/// Degeneracy plus one, with a witnessing ordering `v_1, ..., v_n` in which
/// every vertex has fewer than `col` neighbours before it.
pub fn coloring_number(g: &SimpleGraph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut worst = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("a vertex remains");
        worst = worst.max(deg[v]);
        removed[v] = true;
        removal.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    removal.reverse();
    (worst + 1, removal)
}

fn k_colorable(g: &SimpleGraph, k: usize, budget: &mut NodeBudget) -> Result<bool> {
    fn rec(
        g: &SimpleGraph,
        k: usize,
        colors: &mut Vec<Option<usize>>,
        used: usize,
        remaining: usize,
        budget: &mut NodeBudget,
    ) -> Result<bool> {
        if remaining == 0 {
            return Ok(true);
        }
        // DSATUR choice: saturation, then uncoloured degree, then lowest index.
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..g.n() {
            if colors[v].is_some() {
                continue;
            }
            let mut seen = 0u128;
            let mut free_deg = 0;
            for &w in g.neighbors(v) {
                match colors[w] {
                    Some(c) => seen |= 1 << c,
                    None => free_deg += 1,
                }
            }
            let sat = seen.count_ones() as usize;
            let better = match best {
                None => true,
                Some((_, bs, bd)) => (sat, free_deg) > (bs, bd),
            };
            if better {
                best = Some((v, sat, free_deg));
            }
        }
        let (v, _, _) = best.expect("an uncoloured vertex exists");
        let limit = k.min(used + 1);
        for c in 0..limit {
            if g.neighbors(v).iter().any(|&w| colors[w] == Some(c)) {
                continue;
            }
            budget.tick()?;
            colors[v] = Some(c);
            if rec(g, k, colors, used.max(c + 1), remaining - 1, budget)? {
                return Ok(true);
            }
            colors[v] = None;
        }
        Ok(false)
    }
    if k > 127 {
        return Ok(k >= g.n() || k_colorable(g, 127, budget)?);
    }
    let mut colors = vec![None; g.n()];
    rec(g, k, &mut colors, 0, g.n(), budget)
}

/// Exact chromatic number by DSATUR-ordered backtracking.
pub fn chromatic_number(g: &SimpleGraph, limits: &Limits) -> Result<usize> {
    let mut budget = NodeBudget::new(limits.nodes);
    let mut k = if g.edge_count() == 0 { 1 } else { 2 };
    let (upper, _) = coloring_number(g);
    while k < upper {
        if k_colorable(g, k, &mut budget)? {
            return Ok(k);
        }
        k += 1;
    }
    Ok(upper)
}

/// True iff `χ(g) = k` and deleting any edge or any vertex lowers the chromatic number.
pub fn is_k_critical(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<bool> {
    if k < 2 {
        return Err(Error::Precondition("criticality is defined for k >= 2".into()));
    }
    if chromatic_number(g, limits)? != k {
        return Ok(false);
    }
    let mut budget = NodeBudget::new(limits.nodes);
    for e in 0..g.edge_count() {
        if !k_colorable(&g.without_edge(e), k - 1, &mut budget)? {
            return Ok(false);
        }
    }
    for v in 0..g.n() {
        if !k_colorable(&g.without_vertex(v)?, k - 1, &mut budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All proper `k`-colourings in lexicographic order of their colour vectors.
pub fn enumerate_proper_colorings(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<Vec<ProperColoring>> {
    enumerate_proper_colorings_in(g, k, 0..k, limits)
}

/// As [`enumerate_proper_colorings`], restricted to colourings whose first
/// vertex has a colour in `first`; disjoint ranges split the work.
pub fn enumerate_proper_colorings_in(
    g: &SimpleGraph,
    k: usize,
    first: Range<usize>,
    limits: &Limits,
) -> Result<Vec<ProperColoring>> {
    let mut budget = NodeBudget::new(limits.nodes);
    let mut out = Vec::new();
    let mut colors = vec![0usize; g.n()];
    fn rec(
        g: &SimpleGraph,
        k: usize,
        v: usize,
        first: &Range<usize>,
        colors: &mut Vec<usize>,
        out: &mut Vec<ProperColoring>,
        budget: &mut NodeBudget,
    ) -> Result<()> {
        if v == g.n() {
            out.push(ProperColoring {
                colors: colors.clone(),
                k,
            });
            return Ok(());
        }
        let range = if v == 0 { first.start..first.end.min(k) } else { 0..k };
        for c in range {
            if g.neighbors(v).iter().any(|&w| w < v && colors[w] == c) {
                continue;
            }
            budget.tick()?;
            colors[v] = c;
            rec(g, k, v + 1, first, colors, out, budget)?;
        }
        Ok(())
    }
    rec(g, k, 0, &first, &mut colors, &mut out, &mut budget)?;
    Ok(out)
}

const DIRECT_LIMIT: u64 = 1_000_000;
const MEMO_MAX_N: usize = 8;

/// Adjacency bitsets, `n <= 64`.
#[derive(Clone)]
struct Bits {
    adj: Vec<u64>,
}

impl Bits {
    fn from_graph(g: &SimpleGraph) -> Self {
        let mut adj = vec![0u64; g.n()];
        for &(u, v) in g.edges() {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Bits { adj }
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    fn delete_edge(&self, u: usize, v: usize) -> Bits {
        let mut b = self.clone();
        b.adj[u] &= !(1 << v);
        b.adj[v] &= !(1 << u);
        b
    }

    /// Merges `v` into `u` and removes `v`, shifting higher indices down.
    fn contract(&self, u: usize, v: usize) -> Bits {
        let n = self.n();
        let mut merged = self.adj.clone();
        merged[u] |= merged[v];
        merged[u] &= !(1 << u) & !(1 << v);
        for w in 0..n {
            if merged[w] & (1 << v) != 0 {
                merged[w] &= !(1 << v);
                if w != u {
                    merged[w] |= 1 << u;
                }
            }
        }
        let squeeze = |mask: u64| -> u64 {
            let low = mask & ((1u64 << v) - 1);
            let high = if v + 1 < 64 { (mask >> (v + 1)) << v } else { 0 };
            low | high
        };
        let adj = (0..n).filter(|&w| w != v).map(|w| squeeze(merged[w])).collect();
        Bits { adj }
    }

    /// Canonical code: the minimum upper-triangle bit string over all
    /// relabelings that list vertices by non-increasing degree.
    fn canonical_key(&self) -> u64 {
        let n = self.n();
        let deg: Vec<u32> = self.adj.iter().map(|a| a.count_ones()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
        // Blocks of equal degree are permuted independently.
        let mut blocks = Vec::new();
        let mut s = 0;
        while s < n {
            let mut e = s;
            while e < n && deg[order[e]] == deg[order[s]] {
                e += 1;
            }
            blocks.push(s..e);
            s = e;
        }
        let mut best = u64::MAX;
        let mut perm = order.clone();
        fn code(adj: &[u64], perm: &[usize]) -> u64 {
            let mut c = 0u64;
            for j in 1..perm.len() {
                for i in 0..j {
                    c = (c << 1) | ((adj[perm[i]] >> perm[j]) & 1);
                }
            }
            c
        }
        fn rec(adj: &[u64], blocks: &[Range<usize>], b: usize, perm: &mut Vec<usize>, best: &mut u64) {
            if b == blocks.len() {
                *best = (*best).min(code(adj, perm));
                return;
            }
            let r = blocks[b].clone();
            heap_permute(&mut perm[r.clone()].to_vec(), r.len(), &mut |p| {
                perm[r.clone()].copy_from_slice(p);
                rec(adj, blocks, b + 1, perm, best);
            });
        }
        rec(&self.adj, &blocks, 0, &mut perm, &mut best);
        (best << 4) | n as u64
    }
}

fn heap_permute(a: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(a);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(a, k - 1, f);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(a, k - 1, f);
}

fn count_direct(b: &Bits, k: usize) -> u64 {
    fn rec(b: &Bits, k: usize, v: usize, colors: &mut Vec<usize>) -> u64 {
        if v == b.n() {
            return 1;
        }
        let mut total = 0;
        for c in 0..k {
            let clash = (0..v).any(|w| b.adj[v] & (1 << w) != 0 && colors[w] == c);
            if !clash {
                colors[v] = c;
                total += rec(b, k, v + 1, colors);
            }
        }
        total
    }
    let mut colors = vec![0; b.n()];
    rec(b, k, 0, &mut colors)
}

fn checked_pow(k: usize, n: usize) -> Option<u64> {
    (k as u64).checked_pow(u32::try_from(n).ok()?)
}

struct PolyEval {
    k: usize,
    memo: HashMap<u64, BigUint>,
    budget: NodeBudget,
}

impl PolyEval {
    fn eval(&mut self, b: &Bits) -> Result<BigUint> {
        self.budget.tick()?;
        let n = b.n();
        let k = self.k;
        let m = b.edge_count();
        if m == 0 {
            return Ok(BigUint::from(k).pow(n as u32));
        }
        if m == n * (n - 1) / 2 {
            return Ok(falling_factorial(k, n));
        }
        if checked_pow(k, n).is_some_and(|t| t <= DIRECT_LIMIT) {
            return Ok(BigUint::from(count_direct(b, k)));
        }
        let key = (n <= MEMO_MAX_N).then(|| b.canonical_key());
        if let Some(v) = key.and_then(|key| self.memo.get(&key)) {
            return Ok(v.clone());
        }
        // Pivot on an edge at a highest-degree vertex, toward its highest-degree neighbour.
        let deg = |v: usize| b.adj[v].count_ones();
        let u = (0..n).max_by_key(|&v| (deg(v), std::cmp::Reverse(v))).expect("nonempty");
        let v = (0..n)
            .filter(|&w| b.adj[u] & (1 << w) != 0)
            .max_by_key(|&w| (deg(w), std::cmp::Reverse(w)))
            .expect("u has an edge");
        let deleted = self.eval(&b.delete_edge(u, v))?;
        let contracted = self.eval(&b.contract(u, v))?;
        let value = deleted - contracted;
        if let Some(key) = key {
            self.memo.insert(key, value.clone());
        }
        Ok(value)
    }
}

fn falling_factorial(k: usize, n: usize) -> BigUint {
    if n > k {
        return BigUint::zero();
    }
    (0..n).fold(BigUint::one(), |acc, i| acc * BigUint::from(k - i))
}

/// Number of proper `k`-colourings, by deletion–contraction with
/// memoisation on small canonical forms and direct counting once `k^n <= 10^6`.
pub fn chromatic_polynomial_eval(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<BigUint> {
    if g.n() > 64 {
        return Err(Error::Precondition("chromatic polynomial supports at most 64 vertices".into()));
    }
    let mut eval = PolyEval {
        k,
        memo: HashMap::new(),
        budget: NodeBudget::new(limits.nodes),
    };
    eval.eval(&Bits::from_graph(g))
}
