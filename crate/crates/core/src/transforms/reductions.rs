use serde::{Deserialize, Serialize};

use crate::connectivity::{edge_connectivity, EdgeConnectivity};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeId, MetrizedGraph};
use crate::invariants::tau;

use super::surgery::{contract_edges, delete_edge};

/// Below this gap `1/12 - τ` the step length falls back to `ε₀`.
const GAP_FLOOR: f64 = 1e-12;

/// Tolerance for the normalization precondition of [`cubic_transform`].
const NORMALIZED_TOL: f64 = 1e-9;

/// One vertex split of the cubic transformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicStep {
    pub vertex: usize,
    /// Step index `k` at this vertex, starting at 0.
    pub k: usize,
    /// Length of the new edge before renormalization.
    pub epsilon: f64,
    pub tau_before: f64,
    pub tau_after: f64,
    /// `τ_k + ε/(1+ε) (1/12 - τ_k)`.
    pub step_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicTransform {
    pub graph: MetrizedGraph,
    pub tau_input: f64,
    pub tau_output: f64,
    /// `ε / (2e - 3v)`; `None` if the input was already cubic.
    pub epsilon0: Option<f64>,
    pub steps: Vec<CubicStep>,
}

/// Turn a normalized 2-connected graph with all valences `>= 3` into a
/// normalized cubic graph whose tau constant exceeds the input's by at most
/// `epsilon`.
///
/// Vertices of valence `n >= 4` are handled in ascending order. At a vertex
/// `p` with incident edges `f_1 < f_2 < ... < f_n` (by edge id), step 0 moves
/// the `p`-ends of `f_1, f_2` to a new vertex `p¹` joined to `p` by a new
/// edge; step `k` moves the `p`-ends of the previous new edge and `f_{k+2}`
/// to `p^{k+1}`. After every step the graph is renormalized. New vertices and
/// edges are appended.
pub fn cubic_transform(g: &MetrizedGraph, epsilon: f64) -> Result<CubicTransform> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::NotApplicable(format!("epsilon must be positive, got {epsilon}")));
    }
    if !g.is_normalized(NORMALIZED_TOL) {
        return Err(Error::NotNormalized { total_length: g.total_length() });
    }
    if let Some(&vertex) = g.cut_vertices().first() {
        return Err(Error::HasCutVertex { vertex });
    }
    let valences = g.valences();
    if let Some((vertex, &valence)) = valences.iter().enumerate().find(|(_, &d)| d < 3) {
        return Err(Error::ValenceBelowThree { vertex, valence });
    }

    let tau_input = tau(g)?;
    let excess: usize = valences.iter().map(|d| d - 3).sum();
    if excess == 0 {
        return Ok(CubicTransform { graph: g.clone(), tau_input, tau_output: tau_input, epsilon0: None, steps: vec![] });
    }
    let eps0 = epsilon / excess as f64;

    let incidence = g.incidence();
    let mut edges = g.edges().to_vec();
    let mut v = g.vertex_count();
    let mut tau_k = tau_input;
    let mut steps = Vec::with_capacity(excess);
    let mut current = g.clone();

    for p in 0..g.vertex_count() {
        let incident = &incidence[p];
        let n = valences[p];
        if n < 4 {
            continue;
        }
        let mut chain: Option<usize> = None;
        for k in 0..n - 3 {
            let gap = 1.0 / 12.0 - tau_k;
            let eps = if gap < GAP_FLOOR { eps0 } else { eps0 / gap };
            let fresh = v;
            v += 1;
            let first = chain.unwrap_or(incident[0]);
            for id in [first, incident[k + 1]] {
                let e = &mut edges[id];
                if e.a == p {
                    e.a = fresh;
                } else {
                    e.b = fresh;
                }
            }
            edges.push(Edge::new(fresh, p, eps));
            chain = Some(edges.len() - 1);
            let scale = 1.0 / (1.0 + eps);
            for e in edges.iter_mut() {
                e.length *= scale;
            }
            current = MetrizedGraph::from_parts(v, edges.clone());
            let tau_next = tau(&current)?;
            steps.push(CubicStep {
                vertex: p,
                k,
                epsilon: eps,
                tau_before: tau_k,
                tau_after: tau_next,
                step_bound: tau_k + eps / (1.0 + eps) * gap,
            });
            tau_k = tau_next;
        }
    }
    Ok(CubicTransform { graph: current, tau_input, tau_output: tau_k, epsilon0: Some(eps0), steps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    /// The edge whose deletion left bridges, as an id of the graph at that step.
    pub edge: EdgeId,
    /// Bridges of `Γ - e_i`, as ids of the graph at that step.
    pub bridges: Vec<EdgeId>,
    pub added_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub graph: MetrizedGraph,
    pub steps: Vec<ReductionStep>,
    /// Edge connectivity of the result; infinite for a loop bouquet.
    pub lambda: EdgeConnectivity,
}

/// Reduce a graph of edge connectivity 2 to one of edge connectivity at
/// least 3 (or to a single vertex carrying loops) with the same tau
/// constant, total length and genus.
///
/// Each round picks the first edge `e_i` such that `Γ - e_i` has a bridge,
/// contracts every bridge of `Γ - e_i` and adds their total length to `e_i`.
pub fn reduce_edge_connectivity_two(g: &MetrizedGraph) -> Result<Reduction> {
    let lambda = edge_connectivity(g);
    if lambda != EdgeConnectivity::Finite(2) {
        return Err(Error::NotApplicable(format!("edge connectivity is {lambda}, reduction needs exactly 2")));
    }
    let mut cur = g.clone();
    let mut steps = Vec::new();
    loop {
        let lambda = edge_connectivity(&cur);
        if lambda != EdgeConnectivity::Finite(2) {
            return Ok(Reduction { graph: cur, steps, lambda });
        }
        let (edge, cut) = cur
            .edge_ids()
            .find_map(|i| {
                let d = delete_edge(&cur, i).ok()?;
                (edge_connectivity(&d.graph) == EdgeConnectivity::Finite(1)).then_some((i, d))
            })
            .expect("a 2-edge cut contains an edge whose deletion leaves a bridge");
        let cut_bridges = cut.graph.bridge_flags();
        let bridges: Vec<EdgeId> =
            cur.edge_ids().filter(|&j| cut.edge(j).is_some_and(|k| cut_bridges[k.0])).collect();
        let added_length: f64 = bridges.iter().map(|j| cur.edges()[j.0].length).sum();
        let mut edges = cur.edges().to_vec();
        edges[edge.0].length += added_length;
        let widened = MetrizedGraph::from_parts(cur.vertex_count(), edges);
        cur = contract_edges(&widened, &bridges)?.graph;
        steps.push(ReductionStep { edge, bridges, added_length });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn cubic_input_is_unchanged() {
        let k4 = complete(4, 1.0).normalize();
        let out = cubic_transform(&k4, 0.01).unwrap();
        assert_eq!(out.graph, k4);
        assert!(out.steps.is_empty());
    }

    #[test]
    fn banana_four() {
        let b = banana(&[1.0; 4]).normalize();
        let out = cubic_transform(&b, 0.01).unwrap();
        assert_eq!(out.graph.vertex_count(), 4);
        assert_eq!(out.graph.edge_count(), 6);
        assert!(out.graph.valences().iter().all(|&d| d == 3));
        assert!((out.graph.total_length() - 1.0).abs() < 1e-12);
        assert!(out.tau_output <= out.tau_input + 0.01 + 1e-9);
        for s in &out.steps {
            assert!(s.tau_after <= s.step_bound + 1e-9);
        }
    }

    #[test]
    fn wheel_hub() {
        let w = wheel(4, 1.0).normalize();
        let out = cubic_transform(&w, 0.001).unwrap();
        assert_eq!(out.steps.len(), 1);
        assert!(out.graph.valences().iter().all(|&d| d == 3));
        assert!(out.tau_output <= out.tau_input + 0.001 + 1e-9);
    }

    #[test]
    fn cubic_preconditions() {
        assert!(matches!(cubic_transform(&banana(&[1.0; 4]), 0.01), Err(Error::NotNormalized { .. })));
        assert!(matches!(cubic_transform(&cycle(3, 1.0).normalize(), 0.01), Err(Error::ValenceBelowThree { .. })));
        let bowtie = MetrizedGraph::new(5, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 3, 1.0), (3, 4, 1.0), (4, 0, 1.0)])
            .unwrap()
            .normalize();
        assert_eq!(cubic_transform(&bowtie, 0.01).unwrap_err(), Error::HasCutVertex { vertex: 0 });
    }

    #[test]
    fn circle_reduces_to_loop() {
        let out = reduce_edge_connectivity_two(&cycle(4, 1.0)).unwrap();
        assert_eq!(out.graph, MetrizedGraph::new(1, [(0, 0, 4.0)]).unwrap());
        assert_eq!(out.lambda, EdgeConnectivity::Infinite);
        let before = tau(&cycle(4, 1.0)).unwrap();
        let after = tau(&out.graph).unwrap();
        assert!((before - 1.0 / 3.0).abs() < 1e-12 && (after - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_triangles_joined_twice() {
        let g = MetrizedGraph::new(6, [
            (0, 1, 1.0),
            (1, 2, 1.0),
            (2, 0, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (5, 3, 1.0),
            (0, 3, 1.0),
            (1, 4, 1.0),
        ])
        .unwrap();
        let out = reduce_edge_connectivity_two(&g).unwrap();
        assert!(matches!(out.lambda, EdgeConnectivity::Infinite) || out.lambda >= EdgeConnectivity::Finite(3));
        assert!(out.graph.edge_count() <= g.edge_count());
        assert_eq!(out.graph.genus(), g.genus());
        assert!((out.graph.total_length() - g.total_length()).abs() < 1e-12);
        assert!((tau(&out.graph).unwrap() - tau(&g).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn reduce_rejects_other_connectivity() {
        assert!(matches!(reduce_edge_connectivity_two(&complete(4, 1.0)), Err(Error::NotApplicable(_))));
    }
}
