use std::collections::HashMap;

use crate::circuit::CircuitAnalysis;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetrizedGraph};
use crate::transforms::contract_edges;

/// Edge-count cap for nested sums (subsets are keyed by a 64-bit mask).
pub const NESTED_MAX_EDGES: usize = 64;

struct Nested<'a, F> {
    g: &'a MetrizedGraph,
    depth: usize,
    leaf: F,
    memo: HashMap<u64, f64>,
}

impl<F> Nested<'_, F>
where
    F: FnMut(&MetrizedGraph, &[EdgeId]) -> Result<f64>,
{
    fn value(&mut self, set: u64, level: usize) -> Result<f64> {
        if let Some(&v) = self.memo.get(&set) {
            return Ok(v);
        }
        let ids: Vec<EdgeId> = (0..self.g.edge_count()).filter(|k| set >> k & 1 == 1).map(EdgeId).collect();
        let s = contract_edges(self.g, &ids)?;
        let out = if level == self.depth {
            (self.leaf)(&s.graph, &ids)?
        } else {
            let a = CircuitAnalysis::new(&s.graph)?;
            let mut acc = 0.0;
            for k in 0..self.g.edge_count() {
                let Some(here) = s.edge(EdgeId(k)) else { continue };
                if s.graph.edges()[here.0].is_loop() {
                    continue;
                }
                let weight = a.edge_resistance(here).contraction_weight(s.graph.edges()[here.0].length);
                acc += weight * self.value(set | 1 << k, level + 1)?;
            }
            acc
        };
        self.memo.insert(set, out);
        Ok(out)
    }
}

/// `Σ_{i_1} w_{i_1} Σ_{i_2} w_{i_2} ... Σ_{i_k} w_{i_k} f(Γ̄_{i_1…i_k})`, where
/// each `i_t` runs over the non-loop edges of the graph contracted so far and
/// `w = R/(L+R)` is taken in that graph.
///
/// `leaf` receives the contracted graph and the contracted ids (original
/// numbering, ascending). Contracting a set gives the same graph in any
/// order, so partial sums are memoized per set.
pub fn nested_contraction_sum<F>(g: &MetrizedGraph, k: usize, leaf: F) -> Result<f64>
where
    F: FnMut(&MetrizedGraph, &[EdgeId]) -> Result<f64>,
{
    if g.edge_count() > NESTED_MAX_EDGES {
        return Err(Error::TooLarge { vertices: g.vertex_count(), limit: NESTED_MAX_EDGES });
    }
    if k + 1 > g.vertex_count() {
        return Err(Error::NotApplicable(format!("cannot contract {k} edges of a graph with {} vertices", g.vertex_count())));
    }
    Nested { g, depth: k, leaf, memo: HashMap::new() }.value(0, 0)
}
