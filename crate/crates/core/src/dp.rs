//! Exhaustive DP invariants: cover enumeration up to gauge, the DP colour
//! function, the DP-chromatic number, bad-cover search and robust
//! criticality.
//!
//! Full-cover sufficiency: deleting a matched pair never removes a
//! transversal, so every cover's transversal count is at least that of any
//! full cover containing it. Minima and badness over all k-fold covers are
//! therefore decided on full covers alone. Full covers of a connected
//! graph are classified up to relabeling by the permutations left on the
//! non-tree edges once every BFS-tree edge is made the identity.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::coloring::{coloring_number, is_k_critical};
use crate::cover::{canonical_cover, is_canonical, Cover, Matching};
use crate::error::{Error, Limits, Resource, Result};
use crate::graph::SimpleGraph;
use crate::solver::{count_transversals, has_transversal};

fn factorial(k: usize) -> Option<u64> {
    (1..=k as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

/// The `rank`-th permutation of `0..k` in lexicographic order.
pub fn unrank_permutation(k: usize, mut rank: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(k);
    for i in (0..k).rev() {
        let f = factorial(i).expect("rank within k!");
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

fn cap_check(total: Option<u64>, limits: &Limits) -> Result<u64> {
    match total {
        Some(t) if t <= limits.covers => Ok(t),
        _ => Err(Error::CapExceeded {
            resource: Resource::Covers,
            cap: limits.covers,
        }),
    }
}

/// Gauge-reduced full k-fold covers of a connected graph: tree edges are
/// identities and each non-tree edge (ascending index) carries one of the
/// k! permutations. Index `i` is read in mixed radix k!, first non-tree
/// edge most significant, each digit a lexicographic permutation rank.
#[derive(Debug, Clone)]
pub struct FullCoverSpace {
    base: SimpleGraph,
    k: usize,
    non_tree: Vec<usize>,
    radix: u64,
    total: u64,
}

impl FullCoverSpace {
    pub fn new(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let non_tree = g.non_tree_edges();
        let radix = factorial(k).ok_or(Error::CapExceeded {
            resource: Resource::Covers,
            cap: limits.covers,
        })?;
        let total = (0..non_tree.len()).try_fold(1u64, |acc, _| acc.checked_mul(radix));
        let total = cap_check(total, limits)?;
        Ok(FullCoverSpace {
            base: g.clone(),
            k,
            non_tree,
            radix,
            total,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn non_tree_edges(&self) -> &[usize] {
        &self.non_tree
    }

    /// Permutation ranks on the non-tree edges for cover `index`.
    pub fn digits(&self, mut index: u64) -> Vec<u64> {
        let mut d = vec![0; self.non_tree.len()];
        for slot in d.iter_mut().rev() {
            *slot = index % self.radix;
            index /= self.radix;
        }
        d
    }

    pub fn cover_at(&self, index: u64) -> Cover {
        assert!(index < self.total, "cover index out of range");
        let mut matchings = vec![Matching::identity(self.k); self.base.edge_count()];
        for (&e, rank) in self.non_tree.iter().zip(self.digits(index)) {
            matchings[e] = Matching::from_permutation(&unrank_permutation(self.k, rank));
        }
        Cover::new(self.base.clone(), vec![self.k; self.base.n()], matchings).expect("well-formed full cover")
    }

    /// True for the single class with identity holonomy everywhere.
    pub fn is_canonical_index(&self, index: u64) -> bool {
        index == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Cover> + '_ {
        (0..self.total).map(move |i| self.cover_at(i))
    }
}

pub fn enumerate_full_covers(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<Vec<Cover>> {
    let space = FullCoverSpace::new(g, k, limits)?;
    Ok(space.iter().collect())
}

/// Every partial injection `0..k -> 0..k`, ordered lexicographically with
/// "unmatched" before every colour.
pub fn partial_injections(k: usize) -> Vec<Matching> {
    fn rec(k: usize, fwd: &mut Vec<Option<usize>>, used: &mut Vec<bool>, out: &mut Vec<Matching>) {
        if fwd.len() == k {
            out.push(Matching::new(fwd.clone(), k).expect("injective"));
            return;
        }
        fwd.push(None);
        rec(k, fwd, used, out);
        fwd.pop();
        for b in 0..k {
            if !used[b] {
                used[b] = true;
                fwd.push(Some(b));
                rec(k, fwd, used, out);
                fwd.pop();
                used[b] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(k, &mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Every k-fold cover with arbitrary partial matchings, no reduction. Index
/// `i` is read in mixed radix (first edge most significant) over
/// [`partial_injections`].
#[derive(Debug, Clone)]
pub struct AllCoverSpace {
    base: SimpleGraph,
    k: usize,
    options: Vec<Matching>,
    total: u64,
}

impl AllCoverSpace {
    pub fn new(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<Self> {
        // the option list itself is only built once the total is known to fit
        let per_edge: Option<u64> = (0..=k).try_fold(0u64, |acc, j| {
            let choose = binomial(k, j)?;
            acc.checked_add(choose.checked_mul(choose)?.checked_mul(factorial(j)?)?)
        });
        let total = per_edge.and_then(|p| (0..g.edge_count()).try_fold(1u64, |acc, _| acc.checked_mul(p)));
        let total = cap_check(total, limits)?;
        Ok(AllCoverSpace {
            base: g.clone(),
            k,
            options: partial_injections(k),
            total,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn cover_at(&self, mut index: u64) -> Cover {
        assert!(index < self.total, "cover index out of range");
        let radix = self.options.len() as u64;
        let mut matchings = vec![Matching::empty(self.k, self.k); self.base.edge_count()];
        for slot in matchings.iter_mut().rev() {
            *slot = self.options[(index % radix) as usize].clone();
            index /= radix;
        }
        Cover::new(self.base.clone(), vec![self.k; self.base.n()], matchings).expect("well-formed cover")
    }

    pub fn iter(&self) -> impl Iterator<Item = Cover> + '_ {
        (0..self.total).map(move |i| self.cover_at(i))
    }
}

fn binomial(n: usize, r: usize) -> Option<u64> {
    let mut acc = 1u64;
    for i in 0..r as u64 {
        acc = acc.checked_mul(n as u64 - i)? / (i + 1);
    }
    Some(acc)
}

pub fn enumerate_all_covers(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<Vec<Cover>> {
    let space = AllCoverSpace::new(g, k, limits)?;
    Ok(space.iter().collect())
}

/// Smallest index whose probe yields a value (or an error); deterministic
/// under any thread count.
fn first_hit<T: Send>(total: u64, probe: impl Fn(u64) -> Result<Option<T>> + Sync) -> Result<Option<T>> {
    let hit = (0..total)
        .into_par_iter()
        .map(&probe)
        .find_first(|r| !matches!(r, Ok(None)));
    match hit {
        None => Ok(None),
        Some(r) => r,
    }
}

fn dp_count_connected(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<BigUint> {
    let space = FullCoverSpace::new(g, k, limits)?;
    let counts: Result<Vec<BigUint>> = (0..space.total())
        .into_par_iter()
        .map(|i| count_transversals(&space.cover_at(i), limits))
        .collect();
    Ok(counts?.into_iter().min().expect("at least one cover"))
}

/// The DP colour function: least transversal count over k-fold covers.
/// Components are handled independently and multiplied.
pub fn p_dp(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<BigUint> {
    let mut product = BigUint::one();
    for comp in g.components() {
        let sub = g.induced(&comp)?;
        product *= dp_count_connected(&sub, k, limits)?;
        if product == BigUint::default() {
            break;
        }
    }
    Ok(product)
}

/// First gauge-reduced full k-fold cover without a transversal.
pub fn find_bad_full_cover(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<Option<Cover>> {
    let space = FullCoverSpace::new(g, k, limits)?;
    first_hit(space.total(), |i| {
        let c = space.cover_at(i);
        Ok((!has_transversal(&c, limits)?).then_some(c))
    })
}

/// DP-chromatic number, searching k upward from 1. The coloring number is
/// an upper bound: at k = col the covers are still enumerated when that
/// fits the cap, otherwise the bound is taken as is.
pub fn chi_dp(g: &SimpleGraph, limits: &Limits) -> Result<usize> {
    let mut best = usize::from(g.n() > 0);
    for comp in g.components() {
        let sub = g.induced(&comp)?;
        best = best.max(chi_dp_connected(&sub, limits)?);
    }
    Ok(best)
}

fn chi_dp_connected(g: &SimpleGraph, limits: &Limits) -> Result<usize> {
    let (col, _) = coloring_number(g);
    for k in 1..=col {
        match find_bad_full_cover(g, k, limits) {
            Ok(None) => return Ok(k),
            Ok(Some(_)) => {}
            Err(Error::CapExceeded { .. }) if k == col => return Ok(col),
            Err(e) => return Err(e),
        }
    }
    Err(Error::Hypothesis(format!("bad {col}-fold cover found despite coloring number {col}")))
}

/// Cover-checking strategy for robust criticality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Gauge-reduced full covers plus single-pair deletions of the canonical cover.
    Reduced,
    /// Every cover with partial matchings, checked against the definition.
    Oracle,
}

/// A bad `fold`-fold cover that is not canonical, if any.
///
/// Reduced mode: a bad cover extends to a bad full cover, which (after
/// relabeling) is either non-canonical — caught by scanning non-identity
/// holonomies — or canonical, in which case the bad cover is the canonical
/// cover itself or lies below the canonical cover with one pair removed.
pub fn every_bad_cover_canonical_witness(
    g: &SimpleGraph,
    fold: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<Option<Cover>> {
    match mode {
        Mode::Reduced => {
            let space = FullCoverSpace::new(g, fold, limits)?;
            let found = first_hit(space.total(), |i| {
                if space.is_canonical_index(i) {
                    return Ok(None);
                }
                let c = space.cover_at(i);
                Ok((!has_transversal(&c, limits)?).then_some(c))
            })?;
            if found.is_some() {
                return Ok(found);
            }
            let canon = canonical_cover(g, fold);
            let pairs: Vec<(usize, usize)> = (0..g.edge_count()).flat_map(|e| (0..fold).map(move |a| (e, a))).collect();
            first_hit(pairs.len() as u64, |i| {
                let (e, a) = pairs[i as usize];
                let c = canon.without_pair(e, a);
                Ok((!has_transversal(&c, limits)?).then_some(c))
            })
        }
        Mode::Oracle => {
            let space = AllCoverSpace::new(g, fold, limits)?;
            first_hit(space.total(), |i| {
                let c = space.cover_at(i);
                if has_transversal(&c, limits)? || is_canonical(&c)? {
                    Ok(None)
                } else {
                    Ok(Some(c))
                }
            })
        }
    }
}

pub fn every_bad_cover_canonical(g: &SimpleGraph, fold: usize, mode: Mode, limits: &Limits) -> Result<bool> {
    Ok(every_bad_cover_canonical_witness(g, fold, mode, limits)?.is_none())
}

/// A bad `fold`-fold cover with some matching not perfect, if any. Any such
/// cover sits below a full cover with one pair removed, so it suffices to
/// try single-pair deletions of the bad gauge-reduced full covers.
pub fn non_full_bad_cover(g: &SimpleGraph, fold: usize, limits: &Limits) -> Result<Option<Cover>> {
    let space = FullCoverSpace::new(g, fold, limits)?;
    first_hit(space.total(), |i| {
        let c = space.cover_at(i);
        if has_transversal(&c, limits)? {
            return Ok(None);
        }
        for e in 0..g.edge_count() {
            for a in 0..fold {
                let d = c.without_pair(e, a);
                if !has_transversal(&d, limits)? {
                    return Ok(Some(d));
                }
            }
        }
        Ok(None)
    })
}

pub fn every_bad_cover_full(g: &SimpleGraph, fold: usize, limits: &Limits) -> Result<bool> {
    Ok(non_full_bad_cover(g, fold, limits)?.is_none())
}

#[derive(Debug, Clone)]
pub struct RobustVerdict {
    pub robust: bool,
    pub critical: bool,
    /// A non-canonical bad (k−1)-fold cover when criticality holds but robustness fails.
    pub witness: Option<Cover>,
}

/// k-critical and every bad (k−1)-fold cover canonical.
pub fn is_robustly_critical(g: &SimpleGraph, k: usize, mode: Mode, limits: &Limits) -> Result<RobustVerdict> {
    if k < 2 {
        return Err(Error::Precondition("robust criticality needs k >= 2".into()));
    }
    let critical = is_k_critical(g, k, limits)?;
    if !critical {
        return Ok(RobustVerdict {
            robust: false,
            critical,
            witness: None,
        });
    }
    let witness = every_bad_cover_canonical_witness(g, k - 1, mode, limits)?;
    Ok(RobustVerdict {
        robust: witness.is_none(),
        critical,
        witness,
    })
}

/// `min{χ_DP(G) + col(H), χ_DP(H) + col(G)} − 1` for a Cartesian product.
pub fn product_upper_bound(chi_dp_g: usize, col_g: usize, chi_dp_h: usize, col_h: usize) -> Result<usize> {
    if [chi_dp_g, col_g, chi_dp_h, col_h].contains(&0) {
        return Err(Error::Domain("product bound inputs must be positive".into()));
    }
    Ok((chi_dp_g + col_h).min(chi_dp_h + col_g) - 1)
}
