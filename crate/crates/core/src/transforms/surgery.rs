use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, MetrizedGraph};

/// Result of a surgery: the new graph plus how the old labels map into it.
#[derive(Debug, Clone, PartialEq)]
pub struct Surgery {
    pub graph: MetrizedGraph,
    /// For each edge of the source graph, its id in `graph` (`None` if removed).
    pub edge_map: Vec<Option<EdgeId>>,
    /// For each vertex of the source graph, the vertex it became.
    pub vertex_map: Vec<usize>,
}

impl Surgery {
    pub fn into_graph(self) -> MetrizedGraph {
        self.graph
    }

    pub fn edge(&self, old: EdgeId) -> Option<EdgeId> {
        self.edge_map.get(old.0).copied().flatten()
    }

    pub fn vertex(&self, old: usize) -> usize {
        self.vertex_map[old]
    }

    /// Compose with a surgery applied to `self.graph`.
    pub fn then(self, next: Surgery) -> Surgery {
        let edge_map = self.edge_map.iter().map(|m| m.and_then(|e| next.edge(e))).collect();
        let vertex_map = self.vertex_map.iter().map(|&v| next.vertex(v)).collect();
        Surgery { graph: next.graph, edge_map, vertex_map }
    }

    fn identity(g: &MetrizedGraph) -> Surgery {
        Surgery {
            graph: g.clone(),
            edge_map: g.edge_ids().map(Some).collect(),
            vertex_map: (0..g.vertex_count()).collect(),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Merge the given vertex pairs and drop the edges rejected by `keep`.
///
/// Merged classes are relabeled by the rank of their smallest member, and
/// surviving edges keep their relative order. The result therefore depends
/// only on the partition and the kept set, not on the order of merges.
pub(crate) fn quotient(g: &MetrizedGraph, merges: &[(usize, usize)], keep: impl Fn(usize) -> bool) -> Surgery {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in merges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut vertex_map = vec![0; n];
    for v in 0..n {
        let root = find(&mut parent, v);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        vertex_map[v] = label[root];
    }
    let mut edges = Vec::new();
    let mut edge_map = Vec::with_capacity(g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        if keep(i) {
            edge_map.push(Some(EdgeId(edges.len())));
            edges.push(Edge::new(vertex_map[e.a], vertex_map[e.b], e.length));
        } else {
            edge_map.push(None);
        }
    }
    Surgery { graph: MetrizedGraph::from_parts(next, edges), edge_map, vertex_map }
}

/// `Γ - e_i`: remove the interior of an edge, keeping all vertices.
pub fn delete_edge(g: &MetrizedGraph, i: EdgeId) -> Result<Surgery> {
    g.edge(i)?;
    if g.components_without(Some(i)).0 > 1 {
        return Err(Error::WouldDisconnect { edge: i.0 });
    }
    Ok(quotient(g, &[], |k| k != i.0))
}

/// `Γ̄_i`: merge the endpoints of `e_i` and drop it. Contracting a self-loop
/// simply deletes it.
pub fn contract_edge(g: &MetrizedGraph, i: EdgeId) -> Result<Surgery> {
    contract_edges(g, &[i])
}

/// Contract a set of edges at once (ids in `g`).
pub fn contract_edges(g: &MetrizedGraph, ids: &[EdgeId]) -> Result<Surgery> {
    let mut merges = Vec::with_capacity(ids.len());
    let mut drop = vec![false; g.edge_count()];
    for &i in ids {
        let e = g.edge(i)?;
        merges.push((e.a, e.b));
        drop[i.0] = true;
    }
    Ok(quotient(g, &merges, |k| !drop[k]))
}

/// `Γ̃_i`: merge the endpoints of `e_i` but keep it as a self-loop.
pub fn identify_endpoints(g: &MetrizedGraph, i: EdgeId) -> Result<Surgery> {
    let e = g.edge(i)?;
    Ok(quotient(g, &[(e.a, e.b)], |_| true))
}

/// `Γ_pq`: glue two distinct vertices together.
pub fn identify_points(g: &MetrizedGraph, p: usize, q: usize) -> Result<Surgery> {
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    if p == q {
        return Err(Error::SameVertex { vertex: p });
    }
    Ok(quotient(g, &[(p, q)], |_| true))
}

/// `Γ_(p,q)`: add a new edge of length `length` from `p` to `q`. It is
/// appended at the end of the edge list.
pub fn attach_edge(g: &MetrizedGraph, p: usize, q: usize, length: f64) -> Result<Surgery> {
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::NonPositiveLength { edge: g.edge_count(), length });
    }
    let mut edges = g.edges().to_vec();
    edges.push(Edge::new(p, q, length));
    let mut s = Surgery::identity(g);
    s.graph = MetrizedGraph::from_parts(g.vertex_count(), edges);
    Ok(s)
}

/// `Γ^DA`: every edge `e_i` becomes two parallel edges `e_{i,1}, e_{i,2}` of
/// length `L_i / 2`, placed at positions `2i` and `2i + 1`. The edge map
/// sends `e_i` to `e_{i,1}`.
pub fn double_adjusted(g: &MetrizedGraph) -> Surgery {
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for e in g.edges() {
        let half = Edge::new(e.a, e.b, e.length / 2.0);
        edges.push(half);
        edges.push(half);
    }
    Surgery {
        graph: MetrizedGraph::from_parts(g.vertex_count(), edges),
        edge_map: g.edge_ids().map(|i| Some(EdgeId(2 * i.0))).collect(),
        vertex_map: (0..g.vertex_count()).collect(),
    }
}

/// A graph whose edges have each been cut into `m` equal pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct Subdivision {
    pub graph: MetrizedGraph,
    pub pieces: usize,
    source_vertices: usize,
}

impl Subdivision {
    /// Vertex at the `j`-th cut point (`0 < j < m`) of original edge `i`,
    /// counted from its `a` end.
    pub fn interior_vertex(&self, i: EdgeId, j: usize) -> usize {
        assert!(j > 0 && j < self.pieces, "interior index out of range");
        self.source_vertices + i.0 * (self.pieces - 1) + (j - 1)
    }

    /// The `j`-th piece (`0 <= j < m`) of original edge `i`.
    pub fn piece(&self, i: EdgeId, j: usize) -> EdgeId {
        EdgeId(i.0 * self.pieces + j)
    }
}

/// Insert `m - 1` valence-2 vertices on every edge. Original vertices keep
/// their labels; new ones follow, edge by edge.
pub fn subdivide(g: &MetrizedGraph, m: usize) -> Result<Subdivision> {
    if m == 0 {
        return Err(Error::NotApplicable("subdivision needs at least one piece per edge".into()));
    }
    let v = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count() * m);
    for (i, e) in g.edges().iter().enumerate() {
        let h = e.length / m as f64;
        let node = |j: usize| match j {
            0 => e.a,
            j if j == m => e.b,
            j => v + i * (m - 1) + (j - 1),
        };
        for j in 0..m {
            edges.push(Edge::new(node(j), node(j + 1), h));
        }
    }
    let total = v + g.edge_count() * (m - 1);
    Ok(Subdivision { graph: MetrizedGraph::from_parts(total, edges), pieces: m, source_vertices: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn deletion() {
        let tri = cycle(3, 1.0);
        let s = delete_edge(&tri, EdgeId(1)).unwrap();
        assert_eq!(s.graph.edges(), &[Edge::new(0, 1, 1.0), Edge::new(2, 0, 1.0)]);
        assert_eq!(s.edge_map, vec![Some(EdgeId(0)), None, Some(EdgeId(1))]);
        assert_eq!(s.graph.genus(), 0);
        assert_eq!(delete_edge(&banana(&[1.0; 3]), EdgeId(0)).unwrap().graph, banana(&[1.0; 2]));
        assert_eq!(delete_edge(&path(2, 1.0), EdgeId(0)), Err(Error::WouldDisconnect { edge: 0 }));
    }

    #[test]
    fn contraction() {
        let tri = cycle(3, 1.0);
        let s = contract_edge(&tri, EdgeId(2)).unwrap();
        // Edge 2 joins vertices 2 and 0, which merge into vertex 0.
        assert_eq!(s.graph.vertex_count(), 2);
        assert_eq!(s.graph.edges(), &[Edge::new(0, 1, 1.0), Edge::new(1, 0, 1.0)]);
        assert_eq!(s.vertex_map, vec![0, 1, 0]);

        let s = contract_edge(&banana(&[1.0, 1.0]), EdgeId(0)).unwrap();
        assert_eq!(s.graph.vertex_count(), 1);
        assert_eq!(s.graph.edges(), &[Edge::new(0, 0, 1.0)]);

        let k4 = complete(4, 1.0);
        let s = contract_edge(&k4, EdgeId(0)).unwrap();
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (3, 5));
        let parallel = s.graph.edges().iter().filter(|e| (e.a, e.b) == (0, 1) || (e.a, e.b) == (1, 0)).count();
        assert_eq!(parallel, 2);

        // A self-loop is simply removed.
        let looped = MetrizedGraph::new(2, [(0, 1, 1.0), (1, 1, 2.0)]).unwrap();
        let s = contract_edge(&looped, EdgeId(1)).unwrap();
        assert_eq!(s.graph, path(1, 1.0));
        assert_eq!(s.graph.genus(), looped.genus() - 1);
    }

    #[test]
    fn contraction_is_order_independent() {
        let k4 = complete(4, 1.0);
        let one = contract_edge(&contract_edge(&k4, EdgeId(0)).unwrap().graph, EdgeId(4)).unwrap();
        let both = contract_edges(&k4, &[EdgeId(0), EdgeId(5)]).unwrap();
        assert_eq!(one.graph, both.graph);
    }

    #[test]
    fn identification() {
        let tri = cycle(3, 1.0);
        let s = identify_endpoints(&tri, EdgeId(2)).unwrap();
        assert_eq!(s.graph.edges()[2], Edge::new(0, 0, 1.0));
        assert_eq!(s.graph.total_length(), 3.0);
        let looped = MetrizedGraph::new(1, [(0, 0, 1.0)]).unwrap();
        assert_eq!(identify_endpoints(&looped, EdgeId(0)).unwrap().graph, looped);

        let s = identify_points(&path(1, 1.0), 0, 1).unwrap();
        assert_eq!(s.graph, MetrizedGraph::new(1, [(0, 0, 1.0)]).unwrap());
        let s = identify_points(&path(2, 1.0), 0, 2).unwrap();
        assert_eq!(s.graph, cycle(2, 1.0));
        assert_eq!(identify_points(&tri, 1, 1), Err(Error::SameVertex { vertex: 1 }));
    }

    #[test]
    fn attachment() {
        let s = attach_edge(&path(1, 1.0), 0, 1, 1.0).unwrap();
        assert_eq!(s.graph, banana(&[1.0, 1.0]));
        let s = attach_edge(&cycle(3, 1.0), 1, 1, 2.5).unwrap();
        assert_eq!((s.graph.total_length(), s.graph.genus()), (5.5, 2));
        assert_eq!(s.graph.edges()[3], Edge::new(1, 1, 2.5));
        assert!(matches!(attach_edge(&cycle(3, 1.0), 0, 1, 0.0), Err(Error::NonPositiveLength { .. })));
    }

    #[test]
    fn doubling() {
        assert_eq!(double_adjusted(&path(1, 1.0)).graph, banana(&[0.5, 0.5]));
        let tri = cycle(3, 1.0);
        let da = double_adjusted(&tri);
        assert_eq!(da.graph.edge_count(), 6);
        assert_eq!(da.graph.total_length(), tri.total_length());
        assert_eq!(da.graph.genus(), tri.genus() + tri.edge_count());
        // (Γ - e_i)^DA is Γ^DA with both halves of e_i removed.
        let i = EdgeId(1);
        let lhs = double_adjusted(&delete_edge(&tri, i).unwrap().graph).graph;
        let rhs = quotient(&da.graph, &[], |k| k / 2 != i.0).graph;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn subdivision() {
        let tri = cycle(3, 1.0);
        assert_eq!(subdivide(&tri, 1).unwrap().graph, tri);
        let s = subdivide(&path(1, 1.0), 4).unwrap();
        assert_eq!(s.graph.vertex_count(), 5);
        assert_eq!(s.graph.edges(), &[
            Edge::new(0, 2, 0.25),
            Edge::new(2, 3, 0.25),
            Edge::new(3, 4, 0.25),
            Edge::new(4, 1, 0.25)
        ]);
        assert_eq!(s.interior_vertex(EdgeId(0), 1), 2);
        assert!(subdivide(&tri, 0).is_err());
    }
}
