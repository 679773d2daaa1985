//! DP-covers. Colours are addressed as `(vertex, index)` pairs; the cover
//! graph is never materialised, only the per-edge matchings between lists.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Partial injective map from `L(u)` to `L(v)` for an edge `uv` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
}

impl Matching {
    /// `fwd[a] = Some(b)` pairs colour `a` of the lower endpoint with colour `b`
    /// of the upper one. Fails on repeated or out-of-range targets.
    pub fn new(fwd: Vec<Option<usize>>, target_len: usize) -> std::result::Result<Self, String> {
        let mut bwd = vec![None; target_len];
        for (a, b) in fwd.iter().enumerate() {
            if let Some(b) = *b {
                if b >= target_len {
                    return Err(format!("index {a} maps to {b}, outside 0..{target_len}"));
                }
                if let Some(prev) = bwd[b] {
                    return Err(format!("indices {prev} and {a} both map to {b}"));
                }
                bwd[b] = Some(a);
            }
        }
        Ok(Matching { fwd, bwd })
    }

    pub fn identity(k: usize) -> Self {
        Self::from_permutation(&(0..k).collect::<Vec<_>>())
    }

    pub fn empty(source_len: usize, target_len: usize) -> Self {
        Matching {
            fwd: vec![None; source_len],
            bwd: vec![None; target_len],
        }
    }

    /// `perm[a]` is the partner of `a`. Panics if `perm` is not a permutation.
    pub fn from_permutation(perm: &[usize]) -> Self {
        Self::new(perm.iter().map(|&b| Some(b)).collect(), perm.len()).expect("a permutation")
    }

    pub fn forward(&self, a: usize) -> Option<usize> {
        self.fwd[a]
    }

    pub fn backward(&self, b: usize) -> Option<usize> {
        self.bwd[b]
    }

    pub fn source_len(&self) -> usize {
        self.fwd.len()
    }

    pub fn target_len(&self) -> usize {
        self.bwd.len()
    }

    pub fn pair_count(&self) -> usize {
        self.fwd.iter().flatten().count()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.fwd.iter().enumerate().filter_map(|(a, b)| b.map(|b| (a, b)))
    }

    pub fn is_perfect(&self) -> bool {
        self.fwd.len() == self.bwd.len() && self.fwd.iter().all(Option::is_some)
    }

    pub fn is_identity(&self) -> bool {
        self.is_perfect() && self.fwd.iter().enumerate().all(|(a, b)| *b == Some(a))
    }

    /// The permutation array if this matching is perfect.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        self.is_perfect().then(|| self.fwd.iter().map(|b| b.unwrap()).collect())
    }

    /// Serialised form: one entry per source index, `-1` for unmatched.
    pub fn to_signed(&self) -> Vec<i64> {
        self.fwd.iter().map(|b| b.map_or(-1, |b| b as i64)).collect()
    }

    pub fn without_pair(&self, a: usize) -> Matching {
        let mut m = self.clone();
        if let Some(b) = m.fwd[a].take() {
            m.bwd[b] = None;
        }
        m
    }
}

/// A DP-cover of `base`: list sizes per vertex plus one matching per base edge,
/// aligned with `base.edges()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    base: SimpleGraph,
    fold: Vec<usize>,
    matchings: Vec<Matching>,
}

/// An independent transversal: `choice[v]` is an index into `L(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transversal {
    pub choice: Vec<usize>,
}

impl Transversal {
    /// Checks the transversal invariant directly against every edge.
    pub fn is_valid_for(&self, cover: &Cover) -> bool {
        self.choice.len() == cover.base.n()
            && self.choice.iter().enumerate().all(|(v, &c)| c < cover.fold[v])
            && cover
                .base
                .edges()
                .iter()
                .zip(&cover.matchings)
                .all(|(&(u, v), m)| m.forward(self.choice[u]) != Some(self.choice[v]))
    }
}

/// `relabel[v][i]` is the label in `0..k` of colour `i` of `L(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalLabeling {
    pub relabel: Vec<Vec<usize>>,
}

/// Wire form of a matching: edge endpoints with `u < v` and the signed map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingRecord {
    pub u: usize,
    pub v: usize,
    pub map: Vec<i64>,
}

/// Unvalidated cover data as read from a file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub fold: Vec<usize>,
    pub matchings: Vec<MatchingRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    FoldLength { expected: usize, found: usize },
    NotAnEdge { u: usize, v: usize },
    Orientation { u: usize, v: usize },
    DuplicateEdge { u: usize, v: usize },
    MapLength { u: usize, v: usize, expected: usize, found: usize },
    OutOfRange { u: usize, v: usize, index: usize, value: i64 },
    NotInjective { u: usize, v: usize, target: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks raw cover data against the cover invariants. An empty report means valid.
pub fn validate_cover(base: &SimpleGraph, record: &CoverRecord) -> ValidationReport {
    let mut violations = Vec::new();
    if record.fold.len() != base.n() {
        violations.push(Violation::FoldLength {
            expected: base.n(),
            found: record.fold.len(),
        });
        return ValidationReport { violations };
    }
    let mut seen = vec![false; base.edge_count()];
    for m in &record.matchings {
        let (u, v) = (m.u, m.v);
        if u >= v {
            violations.push(Violation::Orientation { u, v });
            continue;
        }
        let Some(e) = base.edge_index(u, v) else {
            violations.push(Violation::NotAnEdge { u, v });
            continue;
        };
        if std::mem::replace(&mut seen[e], true) {
            violations.push(Violation::DuplicateEdge { u, v });
            continue;
        }
        if m.map.len() != record.fold[u] {
            violations.push(Violation::MapLength {
                u,
                v,
                expected: record.fold[u],
                found: m.map.len(),
            });
            continue;
        }
        let mut hit = vec![false; record.fold[v]];
        for (index, &value) in m.map.iter().enumerate() {
            if value == -1 {
                continue;
            }
            if value < 0 || value as usize >= record.fold[v] {
                violations.push(Violation::OutOfRange { u, v, index, value });
                continue;
            }
            if std::mem::replace(&mut hit[value as usize], true) {
                violations.push(Violation::NotInjective {
                    u,
                    v,
                    target: value as usize,
                });
            }
        }
    }
    ValidationReport { violations }
}

impl Cover {
    /// Builds a cover, validating every matching against `fold`.
    pub fn new(base: SimpleGraph, fold: Vec<usize>, matchings: Vec<Matching>) -> Result<Self> {
        if fold.len() != base.n() {
            return Err(Error::InvalidCover(format!("{} list sizes for {} vertices", fold.len(), base.n())));
        }
        if matchings.len() != base.edge_count() {
            return Err(Error::InvalidCover(format!(
                "{} matchings for {} edges",
                matchings.len(),
                base.edge_count()
            )));
        }
        for (&(u, v), m) in base.edges().iter().zip(&matchings) {
            if m.source_len() != fold[u] || m.target_len() != fold[v] {
                return Err(Error::InvalidCover(format!("matching on ({u},{v}) has wrong list sizes")));
            }
        }
        Ok(Cover { base, fold, matchings })
    }

    /// Validates and converts raw data. Base edges absent from the record get empty matchings.
    pub fn from_record(base: &SimpleGraph, record: &CoverRecord) -> std::result::Result<Cover, ValidationReport> {
        let report = validate_cover(base, record);
        if !report.is_valid() {
            return Err(report);
        }
        let mut matchings: Vec<Matching> = base
            .edges()
            .iter()
            .map(|&(u, v)| Matching::empty(record.fold[u], record.fold[v]))
            .collect();
        for m in &record.matchings {
            let e = base.edge_index(m.u, m.v).expect("validated");
            let fwd = m.map.iter().map(|&x| (x >= 0).then_some(x as usize)).collect();
            matchings[e] = Matching::new(fwd, record.fold[m.v]).expect("validated");
        }
        Ok(Cover {
            base: base.clone(),
            fold: record.fold.clone(),
            matchings,
        })
    }

    /// Every base edge in lexicographic order, unmatched entries as `-1`.
    pub fn to_record(&self) -> CoverRecord {
        CoverRecord {
            fold: self.fold.clone(),
            matchings: self
                .base
                .edges()
                .iter()
                .zip(&self.matchings)
                .map(|(&(u, v), m)| MatchingRecord { u, v, map: m.to_signed() })
                .collect(),
        }
    }

    pub fn base(&self) -> &SimpleGraph {
        &self.base
    }

    pub fn fold(&self, v: usize) -> usize {
        self.fold[v]
    }

    pub fn folds(&self) -> &[usize] {
        &self.fold
    }

    pub fn uniform_fold(&self) -> Option<usize> {
        let k = *self.fold.first()?;
        self.fold.iter().all(|&f| f == k).then_some(k)
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn matching(&self, edge: usize) -> &Matching {
        &self.matchings[edge]
    }

    /// Colour of `L(v)` matched to colour `a` of `L(u)`, if any.
    pub fn partner(&self, u: usize, a: usize, v: usize) -> Option<usize> {
        let e = self.base.edge_index(u, v)?;
        if u < v {
            self.matchings[e].forward(a)
        } else {
            self.matchings[e].backward(a)
        }
    }

    pub fn with_matching(&self, edge: usize, m: Matching) -> Result<Cover> {
        let mut matchings = self.matchings.clone();
        matchings[edge] = m;
        Cover::new(self.base.clone(), self.fold.clone(), matchings)
    }

    /// Copy of this cover with the pair at source index `a` of `edge` deleted.
    pub fn without_pair(&self, edge: usize, a: usize) -> Cover {
        let mut c = self.clone();
        c.matchings[edge] = c.matchings[edge].without_pair(a);
        c
    }

    pub fn matched_pair_count(&self) -> usize {
        self.matchings.iter().map(Matching::pair_count).sum()
    }

    /// Applies per-vertex bijections `relabel[v]: old index -> new index`.
    pub fn relabeled(&self, relabel: &[Vec<usize>]) -> Cover {
        let matchings = self
            .base
            .edges()
            .iter()
            .zip(&self.matchings)
            .map(|(&(u, v), m)| {
                let mut fwd = vec![None; self.fold[u]];
                for (a, b) in m.pairs() {
                    fwd[relabel[u][a]] = Some(relabel[v][b]);
                }
                Matching::new(fwd, self.fold[v]).expect("bijections preserve injectivity")
            })
            .collect();
        Cover {
            base: self.base.clone(),
            fold: self.fold.clone(),
            matchings,
        }
    }
}

/// The k-fold cover with the identity matching on every edge.
pub fn canonical_cover(g: &SimpleGraph, k: usize) -> Cover {
    Cover {
        base: g.clone(),
        fold: vec![k; g.n()],
        matchings: vec![Matching::identity(k); g.edge_count()],
    }
}

/// True iff every matching is a perfect matching of the k-element lists.
pub fn is_full(c: &Cover) -> Result<bool> {
    c.uniform_fold().ok_or(Error::NonUniformFold)?;
    Ok(c.matchings.iter().all(Matching::is_perfect))
}

/// Labels every vertex so that the BFS-forest edges become identities.
fn tree_relabeling(c: &Cover) -> Result<Vec<Vec<usize>>> {
    let g = &c.base;
    let (parent, order) = g.bfs_forest();
    let mut relabel: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for &w in &order {
        let k = c.fold[w];
        match parent[w] {
            None => relabel[w] = (0..k).collect(),
            Some(p) => {
                let mut lab = vec![usize::MAX; k];
                for a in 0..c.fold[p] {
                    let b = c.partner(p, a, w).ok_or(Error::NotFull)?;
                    lab[b] = relabel[p][a];
                }
                relabel[w] = lab;
            }
        }
    }
    Ok(relabel)
}

/// A canonical labeling if one exists. Requires a full cover; the identity is
/// fixed at the smallest vertex of each component and propagated along the BFS
/// forest, after which every remaining edge must agree.
pub fn find_canonical_labeling(c: &Cover) -> Result<Option<CanonicalLabeling>> {
    if !is_full(c)? {
        return Ok(None);
    }
    let relabel = tree_relabeling(c)?;
    let consistent = c
        .base
        .edges()
        .iter()
        .zip(&c.matchings)
        .all(|(&(u, v), m)| m.pairs().all(|(a, b)| relabel[u][a] == relabel[v][b]));
    Ok(consistent.then_some(CanonicalLabeling { relabel }))
}

pub fn is_canonical(c: &Cover) -> Result<bool> {
    Ok(find_canonical_labeling(c)?.is_some())
}

/// Subcover induced by `vertices` (taken in ascending order).
pub fn subcover_induced(c: &Cover, vertices: &[usize]) -> Result<Cover> {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    let base = c.base.induced(&vs)?;
    let fold: Vec<usize> = vs.iter().map(|&v| c.fold[v]).collect();
    let matchings = base
        .edges()
        .iter()
        .map(|&(a, b)| {
            let e = c.base.edge_index(vs[a], vs[b]).expect("induced edge");
            c.matchings[e].clone()
        })
        .collect();
    Cover::new(base, fold, matchings)
}

/// Subcover corresponding to a subgraph `sub` whose vertex `i` is base vertex
/// `embedding[i]` (strictly increasing). Matchings on base edges missing from
/// `sub` are dropped.
pub fn subcover_corresponding(c: &Cover, sub: &SimpleGraph, embedding: &[usize]) -> Result<Cover> {
    if embedding.len() != sub.n() || embedding.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("embedding must be strictly increasing, one entry per vertex".into()));
    }
    let induced = subcover_induced(c, embedding)?;
    let mut matchings = Vec::with_capacity(sub.edge_count());
    for &(a, b) in sub.edges() {
        let e = induced.base.edge_index(a, b).ok_or_else(|| {
            Error::Precondition(format!(
                "edge ({},{}) is not an edge of the base graph",
                embedding[a], embedding[b]
            ))
        })?;
        matchings.push(induced.matchings[e].clone());
    }
    Cover::new(sub.clone(), induced.fold, matchings)
}

/// Relabels lists so every edge of the BFS tree rooted at 0 (children in
/// index order) is the identity. Non-tree edges keep their holonomy.
/// Returns the normalised cover and the applied relabelings.
pub fn gauge_normalize(c: &Cover) -> Result<(Cover, Vec<Vec<usize>>)> {
    if !is_full(c)? {
        return Err(Error::NotFull);
    }
    if !c.base.is_connected() {
        return Err(Error::Disconnected);
    }
    let relabel = tree_relabeling(c)?;
    Ok((c.relabeled(&relabel), relabel))
}
