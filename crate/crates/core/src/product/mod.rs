//! Covers of `M = G □ K_{l,t}` whose copies of `G` are canonical, and the
//! volatility analysis that decides their badness.
//!
//! Layout: vertex `(u, w)` of `M` has index `u * (l + t) + w`, where
//! `w = j` for `x_j` and `w = l + q` for the leaf `y_q`. Every cross edge
//! joins `(u, x_j)` to `(u, y_q)` and its matching is stored from the
//! `x_j` side.

pub mod certificate;
pub mod constants;
pub mod random;
pub mod star;

use rayon::prelude::*;

use crate::coloring::{enumerate_proper_colorings_in, ProperColoring};
use crate::cover::{subcover_induced, Cover, Matching, Transversal};
use crate::error::{Error, Limits, Resource, Result};
use crate::graph::{cartesian_product, complete_bipartite, SimpleGraph};
use crate::solver::{enumerate_transversals, find_transversal};

pub use certificate::{CertificateKind, CoverCertificate, VerifyReport};
pub use constants::{c_bound_check, c_constant, c_constant_strict, f_dp_bracket, volatility_probability, FdpBracket, ProbabilityMethod, ProbabilityResult};
pub use random::{build_random_bad_cover, RandomOutcome};
pub use star::{build_star_bad_cover, star_product_cover, HypothesisChecks, StarOutcome};

/// Index arithmetic for `G □ K_{l,t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductLayout {
    pub n: usize,
    pub l: usize,
    pub t: usize,
}

impl ProductLayout {
    pub fn width(&self) -> usize {
        self.l + self.t
    }

    pub fn x(&self, u: usize, j: usize) -> usize {
        u * self.width() + j
    }

    pub fn y(&self, u: usize, q: usize) -> usize {
        u * self.width() + self.l + q
    }

    /// `V(G) × X` in ascending index order.
    pub fn x_vertices(&self) -> Vec<usize> {
        (0..self.n).flat_map(|u| (0..self.l).map(move |j| self.x(u, j))).collect()
    }

    pub fn leaf_vertices(&self, q: usize) -> Vec<usize> {
        (0..self.n).map(|u| self.y(u, q)).collect()
    }
}

/// A cover of `G □ K_{l,t}` with every copy of `G` carrying identity
/// matchings and arbitrary cross matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCover {
    g: SimpleGraph,
    layout: ProductLayout,
    fold: usize,
    cover: Cover,
}

impl ProductCover {
    /// Builds the cover; `cross(u, j, q)` supplies the matching from
    /// `L(u, x_j)` to `L(u, y_q)`.
    pub fn build(
        g: &SimpleGraph,
        l: usize,
        t: usize,
        fold: usize,
        mut cross: impl FnMut(usize, usize, usize) -> Matching,
    ) -> Result<Self> {
        let layout = ProductLayout { n: g.n(), l, t };
        let m = cartesian_product(g, &complete_bipartite(l, t)?);
        let w = layout.width();
        let matchings = m
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (u, wa, wb) = (a / w, a % w, b % w);
                if a / w == b / w {
                    cross(u, wa, wb - l)
                } else {
                    Matching::identity(fold)
                }
            })
            .collect();
        let cover = Cover::new(m, vec![fold; layout.n * w], matchings)?;
        Ok(ProductCover {
            g: g.clone(),
            layout,
            fold,
            cover,
        })
    }

    /// Wraps an arbitrary uniform cover of `G □ K_{l,t}` (copies need not be
    /// canonical); used for randomised property checks.
    pub fn from_cover(g: &SimpleGraph, l: usize, t: usize, cover: Cover) -> Result<Self> {
        let layout = ProductLayout { n: g.n(), l, t };
        let expected = cartesian_product(g, &complete_bipartite(l, t)?);
        if cover.base() != &expected {
            return Err(Error::InvalidCover("base graph is not G □ K_{l,t}".into()));
        }
        let fold = cover
            .uniform_fold()
            .ok_or(Error::NonUniformFold)?;
        Ok(ProductCover {
            g: g.clone(),
            layout,
            fold,
            cover,
        })
    }

    pub fn base_graph(&self) -> &SimpleGraph {
        &self.g
    }

    pub fn layout(&self) -> ProductLayout {
        self.layout
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn cross(&self, u: usize, j: usize, q: usize) -> &Matching {
        let e = self
            .cover
            .base()
            .edge_index(self.layout.x(u, j), self.layout.y(u, q))
            .expect("cross edge exists");
        self.cover.matching(e)
    }

    pub fn x_subcover(&self) -> Result<Cover> {
        subcover_induced(&self.cover, &self.layout.x_vertices())
    }

    pub fn leaf_subcover(&self, q: usize) -> Result<Cover> {
        subcover_induced(&self.cover, &self.layout.leaf_vertices(q))
    }

    /// Transversals of the `V(G) × X` subcover, as `colors[j][u]`.
    pub fn x_colorings(&self, limits: &Limits) -> Result<Vec<XColoring>> {
        let sub = self.x_subcover()?;
        Ok(enumerate_transversals(&sub, limits)?
            .into_iter()
            .map(|t| XColoring::from_x_transversal(&self.layout, &t))
            .collect())
    }
}

/// A transversal of the `V(G) × X` part: `colors[j][u]` is the colour at `(u, x_j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XColoring {
    pub colors: Vec<Vec<usize>>,
}

impl XColoring {
    fn from_x_transversal(layout: &ProductLayout, t: &Transversal) -> Self {
        let mut colors = vec![vec![0; layout.n]; layout.l];
        for u in 0..layout.n {
            for (j, row) in colors.iter_mut().enumerate() {
                row[u] = t.choice[u * layout.l + j];
            }
        }
        XColoring { colors }
    }

    /// One proper colouring per `x_j`, assuming canonical copies.
    pub fn from_colorings(parts: &[&ProperColoring]) -> Self {
        XColoring {
            colors: parts.iter().map(|c| c.colors.clone()).collect(),
        }
    }
}

/// Outcome of extending an `X`-colouring to one leaf copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolatilityReport {
    pub leaf: usize,
    /// Surviving colour indices of `L(u, y_q)` per `u`.
    pub reduced_lists: Vec<Vec<usize>>,
    /// Number of removed colours when the same set is removed at every `u`.
    pub tau: Option<usize>,
    pub volatile: bool,
    /// Colours on the leaf copy (original indices) when not volatile.
    pub witness: Option<Vec<usize>>,
}

/// Removes every colour of the leaf copy matched to `ix` and solves what remains.
pub fn check_volatile(pc: &ProductCover, ix: &XColoring, q: usize, limits: &Limits) -> Result<VolatilityReport> {
    let lay = pc.layout;
    if q >= lay.t {
        return Err(Error::Precondition(format!("leaf {q} out of range 0..{}", lay.t)));
    }
    let mut removed = vec![vec![false; pc.fold]; lay.n];
    for (u, hit) in removed.iter_mut().enumerate() {
        for j in 0..lay.l {
            if let Some(b) = pc.cross(u, j, q).forward(ix.colors[j][u]) {
                hit[b] = true;
            }
        }
    }
    let reduced_lists: Vec<Vec<usize>> = removed
        .iter()
        .map(|hit| (0..pc.fold).filter(|&a| !hit[a]).collect())
        .collect();
    let tau = removed
        .windows(2)
        .all(|w| w[0] == w[1])
        .then(|| removed.first().map_or(0, |h| h.iter().filter(|&&x| x).count()));

    let leaf = pc.leaf_subcover(q)?;
    let position: Vec<Vec<Option<usize>>> = removed
        .iter()
        .map(|hit| {
            let mut next = 0;
            hit.iter()
                .map(|&gone| {
                    (!gone).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let matchings = pc
        .g
        .edges()
        .iter()
        .zip(leaf.matchings())
        .map(|(&(u, v), m)| {
            let fwd = reduced_lists[u]
                .iter()
                .map(|&a| m.forward(a).and_then(|b| position[v][b]))
                .collect();
            Matching::new(fwd, reduced_lists[v].len()).map_err(Error::InvalidCover)
        })
        .collect::<Result<Vec<_>>>()?;
    let reduced = Cover::new(pc.g.clone(), reduced_lists.iter().map(Vec::len).collect(), matchings)?;
    let witness = find_transversal(&reduced, limits)?
        .map(|t| t.choice.iter().enumerate().map(|(u, &i)| reduced_lists[u][i]).collect());
    Ok(VolatilityReport {
        leaf: q,
        reduced_lists,
        tau,
        volatile: witness.is_none(),
        witness,
    })
}

/// Verdict of the volatility test over every `X`-colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadnessVerdict {
    pub bad: bool,
    pub x_colorings: usize,
    /// A full transversal of the product cover when it is not bad.
    pub counterexample: Option<Transversal>,
}

/// The product cover is bad iff every `X`-colouring is volatile for some leaf.
pub fn verify_bad_by_volatility(pc: &ProductCover, limits: &Limits) -> Result<BadnessVerdict> {
    let colorings = pc.x_colorings(limits)?;
    let escape = colorings
        .par_iter()
        .map(|ix| extend_everywhere(pc, ix, limits))
        .find_first(|r| !matches!(r, Ok(None)));
    let counterexample = match escape {
        None => None,
        Some(r) => r?,
    };
    Ok(BadnessVerdict {
        bad: counterexample.is_none(),
        x_colorings: colorings.len(),
        counterexample,
    })
}

/// A full transversal extending `ix` if it is volatile for no leaf.
fn extend_everywhere(pc: &ProductCover, ix: &XColoring, limits: &Limits) -> Result<Option<Transversal>> {
    let lay = pc.layout;
    let mut choice = vec![0; pc.cover.base().n()];
    for (j, row) in ix.colors.iter().enumerate() {
        for (u, &a) in row.iter().enumerate() {
            choice[lay.x(u, j)] = a;
        }
    }
    for q in 0..lay.t {
        match check_volatile(pc, ix, q, limits)?.witness {
            None => return Ok(None),
            Some(w) => {
                for (u, a) in w.into_iter().enumerate() {
                    choice[lay.y(u, q)] = a;
                }
            }
        }
    }
    Ok(Some(Transversal { choice }))
}

/// Number of `X`-colourings volatile for leaf `q`.
pub fn count_volatile(pc: &ProductCover, q: usize, limits: &Limits) -> Result<u64> {
    let colorings = pc.x_colorings(limits)?;
    let flags: Result<Vec<bool>> = colorings
        .par_iter()
        .map(|ix| Ok(check_volatile(pc, ix, q, limits)?.volatile))
        .collect();
    Ok(flags?.into_iter().filter(|&v| v).count() as u64)
}

/// Proper `k`-colourings grouped by constant mod-`k` shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftClasses {
    pub k: usize,
    /// Lexicographically smallest member of each class, classes in ascending order.
    pub representatives: Vec<ProperColoring>,
}

impl ShiftClasses {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// The member of class `i` obtained by adding `shift` to every colour.
    pub fn member(&self, i: usize, shift: usize) -> ProperColoring {
        let rep = &self.representatives[i];
        ProperColoring {
            colors: rep.colors.iter().map(|&c| (c + shift) % self.k).collect(),
            k: self.k,
        }
    }

    pub fn members(&self, i: usize) -> Vec<ProperColoring> {
        (0..self.k).map(|s| self.member(i, s)).collect()
    }

    /// Shift carrying class `i`'s representative to the member using colour `a` at `u`.
    pub fn shift_of(&self, i: usize, u: usize, a: usize) -> usize {
        (a + self.k - self.representatives[i].colors[u]) % self.k
    }
}

/// Every class contains exactly one colouring with colour 0 at vertex 0,
/// and that one is its lexicographic minimum.
pub fn shift_classes(g: &SimpleGraph, k: usize, limits: &Limits) -> Result<ShiftClasses> {
    if g.n() == 0 || k == 0 {
        return Err(Error::Precondition("shift classes need n >= 1 and k >= 1".into()));
    }
    let representatives = enumerate_proper_colorings_in(g, k, 0..1, limits)?;
    if representatives.len() as u64 > limits.covers {
        return Err(Error::CapExceeded {
            resource: Resource::Colorings,
            cap: limits.covers,
        });
    }
    Ok(ShiftClasses { k, representatives })
}
