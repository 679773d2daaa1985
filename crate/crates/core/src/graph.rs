//! Finite simple undirected graphs with stable vertex indexing.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A finite simple graph on vertices `0..n`.
///
/// Edges are stored as `(u, v)` with `u < v`, sorted lexicographically.
/// Labels are display-only and do not take part in equality.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl PartialEq for SimpleGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for SimpleGraph {}

impl SimpleGraph {
    /// Builds a graph, rejecting loops, parallel edges and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) has endpoint >= {n}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "parallel edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        SimpleGraph {
            n,
            edges,
            adj,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Position of edge `uv` in [`SimpleGraph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    /// Graph with the edge at position `idx` removed.
    pub fn without_edge(&self, idx: usize) -> SimpleGraph {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        let mut g = Self::from_sorted(self.n, edges);
        g.labels = self.labels.clone();
        g
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<SimpleGraph> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
            }
            if pos[v] != usize::MAX {
                return Err(Error::InvalidGraph(format!("vertex {v} listed twice")));
            }
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]));
        let mut g = Self::new(vertices.len(), edges)?;
        if let Some(labels) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| labels[v].clone()).collect());
        }
        Ok(g)
    }

    /// Graph with vertex `v` deleted; remaining vertices keep their relative order.
    pub fn without_vertex(&self, v: usize) -> Result<SimpleGraph> {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// BFS spanning forest: roots are the smallest vertex of each component and
    /// children are visited in increasing index order. Returns `parent` (with
    /// `None` at roots) and the visiting order.
    pub fn bfs_forest(&self) -> (Vec<Option<usize>>, Vec<usize>) {
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(u);
                        queue.push_back(w);
                    }
                }
            }
        }
        (parent, order)
    }

    /// Indices (into [`SimpleGraph::edges`]) of edges not in the BFS forest, ascending.
    pub fn non_tree_edges(&self) -> Vec<usize> {
        let (parent, _) = self.bfs_forest();
        self.edges
            .iter()
            .enumerate()
            .filter(|&(_, &(u, v))| parent[v] != Some(u) && parent[u] != Some(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// |E| - |V| + (number of components).
    pub fn cyclomatic_number(&self) -> usize {
        self.edges.len() + self.components().len() - self.n
    }
}

/// `K_n`.
pub fn complete(n: usize) -> Result<SimpleGraph> {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    SimpleGraph::new(n, edges)
}

/// `C_n` for `n >= 3`.
pub fn cycle(n: usize) -> Result<SimpleGraph> {
    if n < 3 {
        return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
    }
    SimpleGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Result<SimpleGraph> {
    SimpleGraph::new(n, (1..n).map(|i| (i - 1, i)))
}

pub fn edgeless(n: usize) -> Result<SimpleGraph> {
    SimpleGraph::new(n, std::iter::empty())
}

pub fn petersen() -> SimpleGraph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    SimpleGraph::new(10, outer.chain(spokes).chain(inner)).expect("petersen graph is simple")
}

/// `K_{l,t}` with `X = {x_0..x_{l-1}}` at indices `0..l` followed by
/// `Y = {y_0..y_{t-1}}` at indices `l..l+t`.
pub fn complete_bipartite(l: usize, t: usize) -> Result<SimpleGraph> {
    if l == 0 {
        return Err(Error::Precondition("complete_bipartite requires l >= 1".into()));
    }
    let edges = (0..l).flat_map(|j| (0..t).map(move |q| (j, l + q)));
    let labels = (0..l)
        .map(|j| format!("x{j}"))
        .chain((0..t).map(|q| format!("y{q}")))
        .collect();
    SimpleGraph::new(l + t, edges)?.with_labels(labels)
}

/// `G □ H`. Vertex `(u, v)` gets index `u * |V(H)| + v`.
pub fn cartesian_product(g: &SimpleGraph, h: &SimpleGraph) -> SimpleGraph {
    let m = h.n();
    let mut edges = Vec::with_capacity(g.n() * h.edge_count() + m * g.edge_count());
    for u in 0..g.n() {
        for &(a, b) in h.edges() {
            edges.push((u * m + a, u * m + b));
        }
    }
    for &(a, b) in g.edges() {
        for v in 0..m {
            edges.push((a * m + v, b * m + v));
        }
    }
    let labels = (0..g.n())
        .flat_map(|u| (0..m).map(move |v| (u, v)))
        .map(|(u, v)| format!("({},{})", g.label(u), h.label(v)))
        .collect();
    SimpleGraph::new(g.n() * m, edges)
        .expect("product of simple graphs is simple")
        .with_labels(labels)
        .expect("one label per product vertex")
}

/// `G ∨ H`: disjoint union (G first) plus every edge between the two parts.
pub fn join(g: &SimpleGraph, h: &SimpleGraph) -> SimpleGraph {
    let off = g.n();
    let edges = g
        .edges()
        .iter()
        .copied()
        .chain(h.edges().iter().map(|&(a, b)| (a + off, b + off)))
        .chain((0..g.n()).flat_map(|u| (0..h.n()).map(move |v| (u, off + v))));
    SimpleGraph::new(g.n() + h.n(), edges.collect::<Vec<_>>()).expect("join of simple graphs is simple")
}

/// Resolves a named graph: `C<n>`, `K<n>`, `P<n>`, `E<n>` (edgeless),
/// `K<l>,<t>` and `Petersen`.
pub fn named(name: &str) -> Result<SimpleGraph> {
    let bad = || Error::InvalidGraph(format!("unknown graph name {name:?}"));
    if name.eq_ignore_ascii_case("petersen") {
        return Ok(petersen());
    }
    let mut chars = name.chars();
    let head = chars.next().ok_or_else(bad)?;
    let rest = chars.as_str();
    if head == 'K' {
        if let Some((a, b)) = rest.split_once(',') {
            let l = a.parse().map_err(|_| bad())?;
            let t = b.parse().map_err(|_| bad())?;
            return complete_bipartite(l, t);
        }
    }
    let n: usize = rest.parse().map_err(|_| bad())?;
    match head {
        'C' => cycle(n),
        'K' => complete(n),
        'P' => path(n),
        'E' => edgeless(n),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert!(SimpleGraph::new(2, [(0, 0)]).is_err());
        assert!(SimpleGraph::new(2, [(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::new(2, [(0, 2)]).is_err());
        assert!(SimpleGraph::new(0, []).is_err());
    }

    #[test]
    fn product_of_two_edges_is_a_four_cycle() {
        let k2 = complete(2).unwrap();
        let p = cartesian_product(&k2, &k2);
        assert_eq!(p.n(), 4);
        assert_eq!(p.edge_count(), 4);
        assert!((0..4).all(|v| p.degree(v) == 2));
    }

    #[test]
    fn triangular_prism_edge_count() {
        let c3 = cycle(3).unwrap();
        let k11 = complete_bipartite(1, 1).unwrap();
        let p = cartesian_product(&c3, &k11);
        // |V(G)||E(H)| + |V(H)||E(G)|
        assert_eq!(p.n(), 6);
        assert_eq!(p.edge_count(), 3 + 2 * 3);
    }

    #[test]
    fn product_with_single_vertex_is_identity() {
        let c5 = cycle(5).unwrap();
        let k1 = complete(1).unwrap();
        assert_eq!(cartesian_product(&c5, &k1), c5);
    }

    #[test]
    fn row_major_product_indexing() {
        let p = cartesian_product(&path(2).unwrap(), &complete_bipartite(1, 2).unwrap());
        // (0, x0) = 0, (0, y0) = 1, (0, y1) = 2, (1, x0) = 3 ...
        assert!(p.has_edge(0, 1) && p.has_edge(0, 2) && p.has_edge(0, 3));
        assert!(!p.has_edge(1, 2));
        assert_eq!(p.label(4), "(1,y0)");
    }

    #[test]
    fn complete_bipartite_shapes() {
        assert_eq!(complete_bipartite(1, 1).unwrap(), complete(2).unwrap());
        let k23 = complete_bipartite(2, 3).unwrap();
        assert_eq!((k23.n(), k23.edge_count()), (5, 6));
        let k10 = complete_bipartite(1, 0).unwrap();
        assert_eq!((k10.n(), k10.edge_count()), (1, 0));
        assert!(complete_bipartite(0, 3).is_err());
        assert_eq!(k23.label(0), "x0");
        assert_eq!(k23.label(4), "y2");
    }

    #[test]
    fn joins() {
        let k1 = complete(1).unwrap();
        assert_eq!(join(&k1, &k1), complete(2).unwrap());
        let w5 = join(&cycle(5).unwrap(), &k1);
        assert_eq!((w5.n(), w5.edge_count()), (6, 10));
        let k2 = complete(2).unwrap();
        assert_eq!(join(&k2, &k2), complete(4).unwrap());
    }

    #[test]
    fn named_graphs() {
        assert_eq!(named("C5").unwrap(), cycle(5).unwrap());
        assert_eq!(named("K4").unwrap().edge_count(), 6);
        assert_eq!(named("K2,3").unwrap().edge_count(), 6);
        assert_eq!(named("Petersen").unwrap().edge_count(), 15);
        assert!((0..10).all(|v| petersen().degree(v) == 3));
        assert!(named("Q7").is_err());
    }

    #[test]
    fn forest_and_cyclomatic_number() {
        let k4 = complete(4).unwrap();
        assert_eq!(k4.cyclomatic_number(), 3);
        assert_eq!(k4.non_tree_edges().len(), 3);
        let two = SimpleGraph::new(5, [(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(two.components(), vec![vec![0, 1], vec![2, 3, 4]]);
        assert_eq!(two.cyclomatic_number(), 1);
        let (parent, order) = two.bfs_forest();
        assert_eq!(order, vec![0, 1, 2, 3, 4]);
        assert_eq!(parent, vec![None, Some(0), None, Some(2), Some(2)]);
    }
}
