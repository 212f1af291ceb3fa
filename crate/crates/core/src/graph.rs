//! The metrized-graph model.
//!
//! A [`MetrizedGraph`] is a finite connected multigraph whose edges carry
//! positive lengths. Self-loops and parallel edges are allowed. Vertex sets
//! are fixed at construction: valence-2 vertices are kept as given.
//!
//! Edge order is part of the identity of a graph. [`EdgeId`]`(i)` always
//! refers to the `i`-th edge of the construction list, and every surgery in
//! [`crate::transforms`] documents how it renumbers edges. Each edge has a
//! direction `a -> b` fixed by construction; wherever a formula names the
//! endpoints `p_i, q_i` of an edge, `p_i = a` and `q_i = b`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an edge in the construction list of one particular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for EdgeId {
    fn from(i: usize) -> Self {
        EdgeId(i)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

impl Edge {
    pub fn new(a: usize, b: usize, length: f64) -> Self {
        Edge { a, b, length }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    /// The endpoint opposite to `p`, if `p` is an endpoint.
    pub fn other(&self, p: usize) -> Option<usize> {
        if self.a == p {
            Some(self.b)
        } else if self.b == p {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn is_incident(&self, p: usize) -> bool {
        self.a == p || self.b == p
    }
}

/// A finite connected multigraph with positive edge lengths.
///
/// Immutable after construction; every transform returns a new graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetrizedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl MetrizedGraph {
    /// Builds and validates a graph.
    ///
    /// A single vertex with no edges is accepted (total length zero); it
    /// arises when the last self-loop of a bouquet is contracted.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if vertex_count == 0 {
            return Err(Error::NoVertices);
        }
        let mut list = Vec::new();
        for (i, (a, b, length)) in edges.into_iter().enumerate() {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::BadVertexIndex { vertex: v, vertex_count });
                }
            }
            if !(length > 0.0 && length.is_finite()) {
                return Err(Error::NonPositiveLength { edge: i, length });
            }
            list.push(Edge::new(a, b, length));
        }
        let g = MetrizedGraph { vertex_count, edges: list };
        let components = g.component_count();
        if components != 1 {
            return Err(Error::DisconnectedGraph { components });
        }
        Ok(g)
    }

    /// Used by surgeries whose output is connected by construction.
    pub(crate) fn from_parts(vertex_count: usize, edges: Vec<Edge>) -> Self {
        let g = MetrizedGraph { vertex_count, edges };
        debug_assert_eq!(g.component_count(), 1, "surgery produced a disconnected graph");
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id.0).ok_or(Error::BadEdgeIndex { edge: id.0, edge_count: self.edges.len() })
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.iter().map(|e| e.length)
    }

    pub(crate) fn check_vertex(&self, p: usize) -> Result<()> {
        if p < self.vertex_count {
            Ok(())
        } else {
            Err(Error::BadVertexIndex { vertex: p, vertex_count: self.vertex_count })
        }
    }

    /// First Betti number `e - v + 1`.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn total_length(&self) -> f64 {
        self.lengths().sum()
    }

    /// All lengths multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        assert!(factor > 0.0 && factor.is_finite(), "scale factor must be positive");
        let edges = self.edges.iter().map(|e| Edge { length: e.length * factor, ..*e }).collect();
        MetrizedGraph { vertex_count: self.vertex_count, edges }
    }

    /// Rescales to total length one. A graph that is already normalized is
    /// returned unchanged, as is the edgeless point graph.
    pub fn normalize(&self) -> Self {
        let total = self.total_length();
        if total == 0.0 || total == 1.0 {
            return self.clone();
        }
        self.scaled(1.0 / total)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.total_length() - 1.0).abs() <= tol
    }

    /// Number of edge-endpoint incidences at `p`; a self-loop counts twice.
    pub fn valence(&self, p: usize) -> Result<usize> {
        self.check_vertex(p)?;
        Ok(self.valences()[p])
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count];
        for e in &self.edges {
            val[e.a] += 1;
            val[e.b] += 1;
        }
        val
    }

    pub fn min_valence(&self) -> usize {
        self.valences().into_iter().min().unwrap_or(0)
    }

    /// Incidence lists: for every vertex, the ids of incident edges in
    /// ascending order. A self-loop is listed once.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.a].push(i);
            if e.b != e.a {
                inc[e.b].push(i);
            }
        }
        inc
    }

    pub(crate) fn component_count(&self) -> usize {
        components_without(self.vertex_count, &self.edges, None).0
    }

    /// Component labels of `Γ - e_skip` (interior of the edge removed).
    pub fn components_without(&self, skip: Option<EdgeId>) -> (usize, Vec<usize>) {
        components_without(self.vertex_count, &self.edges, skip.map(|e| e.0))
    }

    /// The exact set of bridges, in ascending order. Self-loops are never
    /// bridges, and neither is an edge with a parallel partner.
    pub fn bridges(&self) -> Vec<EdgeId> {
        let mut flags = vec![false; self.edges.len()];
        let inc = self.incidence();
        let n = self.vertex_count;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        // Iterative DFS; stack frames are (vertex, parent edge, next incidence slot).
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, parent_edge, ref mut slot)) = stack.last_mut() {
                if *slot < inc[u].len() {
                    let ei = inc[u][*slot];
                    *slot += 1;
                    let e = &self.edges[ei];
                    if ei == parent_edge || e.is_loop() {
                        continue;
                    }
                    let w = e.other(u).expect("incidence list is consistent");
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, ei, 0));
                    } else {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            flags[parent_edge] = true;
                        }
                    }
                }
            }
        }
        flags.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| EdgeId(i)).collect()
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    pub fn bridge_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.edges.len()];
        for b in self.bridges() {
            flags[b.0] = true;
        }
        flags
    }

    /// Vertices whose removal disconnects the graph viewed as a topological
    /// space. Besides articulation points of the underlying graph this
    /// includes any vertex carrying a self-loop when the graph has another
    /// edge: removing the vertex cuts the loop off.
    pub fn cut_vertices(&self) -> Vec<usize> {
        let n = self.vertex_count;
        let mut cut = vec![false; n];
        for e in &self.edges {
            if e.is_loop() && self.edges.len() > 1 {
                cut[e.a] = true;
            }
        }
        for p in 0..n {
            if cut[p] || n < 3 {
                continue;
            }
            // Articulation test by brute force: small graphs only ever reach here
            // through the cubic transform, where v stays modest.
            let mut label = vec![usize::MAX; n];
            let start = if p == 0 { 1 } else { 0 };
            let mut stack = vec![start];
            label[start] = 0;
            let inc = self.incidence();
            while let Some(u) = stack.pop() {
                for &ei in &inc[u] {
                    if let Some(w) = self.edges[ei].other(u) {
                        if w != p && label[w] == usize::MAX {
                            label[w] = 0;
                            stack.push(w);
                        }
                    }
                }
            }
            if (0..n).any(|w| w != p && label[w] == usize::MAX) {
                cut[p] = true;
            }
        }
        (0..n).filter(|&p| cut[p]).collect()
    }

    /// `true` when every edge has the same length up to `rel_tol`.
    pub fn has_equal_lengths(&self, rel_tol: f64) -> bool {
        let mut it = self.lengths();
        match it.next() {
            None => true,
            Some(first) => it.all(|l| (l - first).abs() <= rel_tol * first),
        }
    }

    /// `Some(n)` when every vertex has valence `n`.
    pub fn regular_degree(&self) -> Option<usize> {
        let val = self.valences();
        let first = *val.first()?;
        val.iter().all(|&d| d == first).then_some(first)
    }
}

fn components_without(n: usize, edges: &[Edge], skip: Option<usize>) -> (usize, Vec<usize>) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, e) in edges.iter().enumerate() {
        if Some(i) == skip {
            continue;
        }
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut count = 0;
    let mut root_label = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if root_label[r] == usize::MAX {
            root_label[r] = count;
            count += 1;
        }
        labels[v] = root_label[r];
    }
    (count, labels)
}

/// Named families used throughout tests, examples and benches.
pub mod families {
    use super::MetrizedGraph;

    /// Cycle on `n >= 1` vertices with the given edge length.
    pub fn cycle(n: usize, length: f64) -> MetrizedGraph {
        let edges = (0..n).map(|i| (i, (i + 1) % n, length));
        MetrizedGraph::new(n, edges).expect("cycle is valid")
    }

    /// Path with `n` edges of the given length.
    pub fn path(n: usize, length: f64) -> MetrizedGraph {
        let edges = (0..n).map(|i| (i, i + 1, length));
        MetrizedGraph::new(n + 1, edges).expect("path is valid")
    }

    /// Two vertices joined by parallel edges with the given lengths.
    pub fn banana(lengths: &[f64]) -> MetrizedGraph {
        MetrizedGraph::new(2, lengths.iter().map(|&l| (0, 1, l))).expect("banana is valid")
    }

    pub fn complete(n: usize, length: f64) -> MetrizedGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b, length));
            }
        }
        MetrizedGraph::new(n, edges).expect("complete graph is valid")
    }

    /// Triangular prism: two triangles joined by three rungs.
    pub fn prism(length: f64) -> MetrizedGraph {
        let edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)];
        MetrizedGraph::new(6, edges.iter().map(|&(a, b)| (a, b, length))).expect("prism is valid")
    }

    /// Wheel with `rim` rim vertices; the hub is vertex 0.
    pub fn wheel(rim: usize, length: f64) -> MetrizedGraph {
        let mut edges = Vec::new();
        for i in 0..rim {
            edges.push((0, i + 1, length));
        }
        for i in 0..rim {
            edges.push((i + 1, (i + 1) % rim + 1, length));
        }
        MetrizedGraph::new(rim + 1, edges).expect("wheel is valid")
    }
}
