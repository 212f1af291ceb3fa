//! Seeded random multigraph generation.
//!
//! Graphs are connected by construction: a uniformly random labeled spanning
//! tree (decoded from a random Prüfer sequence) is laid down first and extra
//! edges with uniformly random endpoints are added on top, so parallel edges
//! and self-loops both occur. Lengths are log-uniform in `[0.1, 10]`.

use rand::Rng;

use crate::graph::{Edge, MetrizedGraph};

pub const MIN_LENGTH: f64 = 0.1;
pub const MAX_LENGTH: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphParams {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Reject samples until the graph has no bridges.
    pub bridgeless: bool,
}

impl Default for GraphParams {
    fn default() -> Self {
        GraphParams { max_vertices: 6, max_edges: 12, bridgeless: true }
    }
}

pub fn log_uniform_length<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let (lo, hi) = (MIN_LENGTH.ln(), MAX_LENGTH.ln());
    rng.random_range(lo..=hi).exp().clamp(MIN_LENGTH, MAX_LENGTH)
}

/// Uniform random labeled tree on `n >= 1` vertices as an edge list.
pub fn random_tree_edges<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    match n {
        0 | 1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &p in &prufer {
        degree[p] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &p in &prufer {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf always exists");
        edges.push((leaf, p));
        degree[leaf] -= 1;
        degree[p] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// A random tree with log-uniform lengths.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MetrizedGraph {
    let edges: Vec<Edge> =
        random_tree_edges(rng, n).into_iter().map(|(a, b)| Edge::new(a, b, log_uniform_length(rng))).collect();
    MetrizedGraph::from_parts(n.max(1), edges)
}

/// A cycle on `n` vertices with log-uniform lengths.
pub fn random_cycle<R: Rng + ?Sized>(rng: &mut R, n: usize) -> MetrizedGraph {
    let edges = (0..n).map(|i| Edge::new(i, (i + 1) % n, log_uniform_length(rng))).collect();
    MetrizedGraph::from_parts(n.max(1), edges)
}

/// One sample from the fuzz distribution.
///
/// The vertex count is uniform in `[2, max_vertices]` and the edge count is
/// uniform in the feasible range up to `max_edges`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, params: &GraphParams) -> MetrizedGraph {
    assert!(params.max_vertices >= 2, "need at least two vertices");
    let min_extra = usize::from(params.bridgeless);
    let v_cap = params.max_vertices.min(params.max_edges.saturating_sub(min_extra).max(1) + 1).max(2);
    loop {
        let v = rng.random_range(2..=v_cap);
        let min_e = if params.bridgeless { v } else { v - 1 };
        let max_e = params.max_edges.max(min_e);
        let e = rng.random_range(min_e..=max_e);
        let mut edges: Vec<Edge> = random_tree_edges(rng, v)
            .into_iter()
            .map(|(a, b)| Edge::new(a, b, log_uniform_length(rng)))
            .collect();
        while edges.len() < e {
            let a = rng.random_range(0..v);
            let b = rng.random_range(0..v);
            edges.push(Edge::new(a, b, log_uniform_length(rng)));
        }
        // Shuffle edge order so the tree skeleton is not always edges 0..v-1.
        for i in (1..edges.len()).rev() {
            let j = rng.random_range(0..=i);
            edges.swap(i, j);
        }
        let g = MetrizedGraph::from_parts(v, edges);
        if !params.bridgeless || g.is_bridgeless() {
            return g;
        }
    }
}

/// Rejection-samples [`random_graph`] until `accept` holds.
pub fn random_graph_where<R, F>(rng: &mut R, params: &GraphParams, mut accept: F) -> MetrizedGraph
where
    R: Rng + ?Sized,
    F: FnMut(&MetrizedGraph) -> bool,
{
    loop {
        let g = random_graph(rng, params);
        if accept(&g) {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    #[test]
    fn prufer_trees_are_trees_and_roughly_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        // Cayley: 16 labeled trees on 4 vertices.
        let mut counts: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
        for _ in 0..16_000 {
            let mut t: Vec<(usize, usize)> =
                random_tree_edges(&mut rng, 4).into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
            t.sort();
            *counts.entry(t).or_default() += 1;
        }
        assert_eq!(counts.len(), 16);
        for &c in counts.values() {
            assert!((800..1200).contains(&c), "count {c}");
        }
    }

    #[test]
    fn samples_respect_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = GraphParams { max_vertices: 6, max_edges: 12, bridgeless: true };
        for _ in 0..200 {
            let g = random_graph(&mut rng, &params);
            assert!(g.vertex_count() <= 6 && g.edge_count() <= 12);
            assert!(g.is_bridgeless());
            assert!(g.lengths().all(|l| (MIN_LENGTH..=MAX_LENGTH).contains(&l)));
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let params = GraphParams::default();
        let a = random_graph(&mut ChaCha8Rng::seed_from_u64(42), &params);
        let b = random_graph(&mut ChaCha8Rng::seed_from_u64(42), &params);
        assert_eq!(a, b);
    }
}
