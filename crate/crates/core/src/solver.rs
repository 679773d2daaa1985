//! Backtracking search for independent transversals of a cover.
//!
//! Domains are per-vertex bitmasks of surviving colour indices. Assigning a
//! colour removes its partners from neighbouring domains (forward checking);
//! a domain that shrinks to one colour is assigned immediately. Free
//! variables are picked by smallest `|domain| / unassigned-degree`, ties by
//! lowest index, and colours are tried in increasing index.

use num_bigint::BigUint;

use crate::cover::{Cover, Transversal};
use crate::error::{Error, Limits, Resource, Result};

const NONE: u8 = u8::MAX;
const UNASSIGNED: u8 = u8::MAX;

fn full_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Solver options.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub node_cap: u64,
    /// Solve connected components of the free vertices independently.
    pub split_components: bool,
}

impl SolverConfig {
    pub fn from_limits(limits: &Limits) -> Self {
        SolverConfig {
            node_cap: limits.nodes,
            split_components: false,
        }
    }

    pub fn with_split(mut self, split: bool) -> Self {
        self.split_components = split;
        self
    }
}

struct Arc {
    to: usize,
    /// `partner[a]` is the colour of `to` matched with colour `a`, or NONE.
    partner: Vec<u8>,
}

struct Search {
    arcs: Vec<Vec<Arc>>,
    domain: Vec<u64>,
    value: Vec<u8>,
    trail: Vec<(usize, u64, u8)>,
    queue: Vec<(usize, u8)>,
    nodes: u64,
    cap: u64,
    split: bool,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Search {
    fn new(c: &Cover, config: SolverConfig) -> Result<Self> {
        let g = c.base();
        let n = g.n();
        if c.folds().iter().any(|&k| k > 64) {
            return Err(Error::Precondition("solver supports lists of at most 64 colours".into()));
        }
        let mut arcs: Vec<Vec<Arc>> = (0..n).map(|_| Vec::new()).collect();
        for (&(u, v), m) in g.edges().iter().zip(c.matchings()) {
            let fwd = (0..c.fold(u)).map(|a| m.forward(a).map_or(NONE, |b| b as u8)).collect();
            let bwd = (0..c.fold(v)).map(|b| m.backward(b).map_or(NONE, |a| a as u8)).collect();
            arcs[u].push(Arc { to: v, partner: fwd });
            arcs[v].push(Arc { to: u, partner: bwd });
        }
        Ok(Search {
            arcs,
            domain: c.folds().iter().map(|&k| full_mask(k)).collect(),
            value: vec![UNASSIGNED; n],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            cap: config.node_cap,
            split: config.split_components,
            stamp: vec![0; n],
            epoch: 0,
        })
    }

    fn set(&mut self, v: usize, domain: u64, value: u8) {
        self.trail.push((v, self.domain[v], self.value[v]));
        self.domain[v] = domain;
        self.value[v] = value;
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, d, x) = self.trail.pop().expect("trail entry");
            self.domain[v] = d;
            self.value[v] = x;
        }
    }

    /// Assigns `v = a` and propagates. `Ok(false)` on a wipe-out.
    fn assign(&mut self, v: usize, a: u8) -> Result<bool> {
        self.queue.clear();
        self.queue.push((v, a));
        while let Some((x, c)) = self.queue.pop() {
            if self.value[x] != UNASSIGNED {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded {
                    resource: Resource::Nodes,
                    cap: self.cap,
                });
            }
            self.set(x, 1 << c, c);
            for i in 0..self.arcs[x].len() {
                let (y, b) = {
                    let arc = &self.arcs[x][i];
                    (arc.to, arc.partner[c as usize])
                };
                if b == NONE || self.value[y] != UNASSIGNED || self.domain[y] & (1 << b) == 0 {
                    continue;
                }
                let d = self.domain[y] & !(1 << b);
                self.set(y, d, UNASSIGNED);
                if d == 0 {
                    return Ok(false);
                }
                if d.count_ones() == 1 {
                    self.queue.push((y, d.trailing_zeros() as u8));
                }
            }
        }
        Ok(true)
    }

    fn free_degree(&self, v: usize) -> u64 {
        self.arcs[v].iter().filter(|a| self.value[a.to] == UNASSIGNED).count() as u64
    }

    fn pick(&self, free: &[usize]) -> usize {
        // minimise dom/deg; a free degree of zero ranks last
        let mut best = free[0];
        let mut best_dom = u64::from(self.domain[best].count_ones());
        let mut best_deg = self.free_degree(best);
        for &v in &free[1..] {
            let dom = u64::from(self.domain[v].count_ones());
            let deg = self.free_degree(v);
            let better = match (deg, best_deg) {
                (0, _) => false,
                (_, 0) => true,
                _ => dom * best_deg < best_dom * deg,
            };
            if better {
                best = v;
                best_dom = dom;
                best_deg = deg;
            }
        }
        best
    }

    fn components(&mut self, free: &[usize]) -> Vec<Vec<usize>> {
        self.epoch += 1;
        let epoch = self.epoch;
        let mut comps = Vec::new();
        for &s in free {
            if self.stamp[s] == epoch {
                continue;
            }
            self.stamp[s] = epoch;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for arc in &self.arcs[u] {
                    let w = arc.to;
                    if self.value[w] == UNASSIGNED && self.stamp[w] != epoch {
                        self.stamp[w] = epoch;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn free_in(&self, scope: &[usize]) -> Vec<usize> {
        scope.iter().copied().filter(|&v| self.value[v] == UNASSIGNED).collect()
    }

    fn find(&mut self, scope: &[usize]) -> Result<bool> {
        let free = self.free_in(scope);
        if free.is_empty() {
            return Ok(true);
        }
        if self.split {
            let comps = self.components(&free);
            if comps.len() > 1 {
                for comp in comps {
                    if !self.find(&comp)? {
                        return Ok(false);
                    }
                }
                return Ok(true);
            }
        }
        let v = self.pick(&free);
        let mut bits = self.domain[v];
        while bits != 0 {
            let a = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            let mark = self.trail.len();
            if self.assign(v, a)? && self.find(&free)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    fn count(&mut self, scope: &[usize]) -> Result<u128> {
        let free = self.free_in(scope);
        if free.is_empty() {
            return Ok(1);
        }
        if self.split {
            let comps = self.components(&free);
            if comps.len() > 1 {
                let mut product = 1u128;
                for comp in comps {
                    let c = self.count(&comp)?;
                    product = product.checked_mul(c).ok_or(Error::Overflow("transversal count"))?;
                    if product == 0 {
                        break;
                    }
                }
                return Ok(product);
            }
        }
        let v = self.pick(&free);
        let mut total = 0u128;
        let mut bits = self.domain[v];
        while bits != 0 {
            let a = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            let mark = self.trail.len();
            if self.assign(v, a)? {
                total = total
                    .checked_add(self.count(&free)?)
                    .ok_or(Error::Overflow("transversal count"))?;
            }
            self.undo(mark);
        }
        Ok(total)
    }

    fn collect(&mut self, scope: &[usize], out: &mut Vec<Transversal>, cap: u64) -> Result<()> {
        let free = self.free_in(scope);
        if free.is_empty() {
            if out.len() as u64 >= cap {
                return Err(Error::CapExceeded {
                    resource: Resource::Colorings,
                    cap,
                });
            }
            out.push(self.snapshot());
            return Ok(());
        }
        let v = self.pick(&free);
        let mut bits = self.domain[v];
        while bits != 0 {
            let a = bits.trailing_zeros() as u8;
            bits &= bits - 1;
            let mark = self.trail.len();
            if self.assign(v, a)? {
                self.collect(&free, out, cap)?;
            }
            self.undo(mark);
        }
        Ok(())
    }

    fn snapshot(&self) -> Transversal {
        Transversal {
            choice: self.value.iter().map(|&x| x as usize).collect(),
        }
    }

    fn all(&self) -> Vec<usize> {
        (0..self.value.len()).collect()
    }

    fn trivially_empty(&self) -> bool {
        self.domain.contains(&0)
    }
}

/// A transversal if one exists, using component splitting.
pub fn find_transversal(c: &Cover, limits: &Limits) -> Result<Option<Transversal>> {
    find_transversal_with(c, SolverConfig::from_limits(limits).with_split(true))
}

pub fn find_transversal_with(c: &Cover, config: SolverConfig) -> Result<Option<Transversal>> {
    let mut s = Search::new(c, config)?;
    if s.trivially_empty() {
        return Ok(None);
    }
    let all = s.all();
    Ok(s.find(&all)?.then(|| s.snapshot()))
}

pub fn has_transversal(c: &Cover, limits: &Limits) -> Result<bool> {
    Ok(find_transversal(c, limits)?.is_some())
}

/// Exact number of transversals, plain backtracking with forward checking.
pub fn count_transversals(c: &Cover, limits: &Limits) -> Result<BigUint> {
    count_transversals_with(c, SolverConfig::from_limits(limits))
}

pub fn count_transversals_with(c: &Cover, config: SolverConfig) -> Result<BigUint> {
    let mut s = Search::new(c, config)?;
    if s.trivially_empty() {
        return Ok(BigUint::default());
    }
    let all = s.all();
    Ok(BigUint::from(s.count(&all)?))
}

/// Every transversal, lexicographically ordered by choice vector. At most
/// `limits.covers` results are collected.
pub fn enumerate_transversals(c: &Cover, limits: &Limits) -> Result<Vec<Transversal>> {
    let mut s = Search::new(c, SolverConfig::from_limits(limits))?;
    let mut out = Vec::new();
    if s.trivially_empty() {
        return Ok(out);
    }
    let all = s.all();
    s.collect(&all, &mut out, limits.covers)?;
    out.sort_unstable();
    Ok(out)
}
