use std::collections::HashMap;

use crate::circuit::CircuitAnalysis;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetrizedGraph};
use crate::transforms::contract_edges;

use super::EdgeSums;

/// Largest vertex count accepted by [`tau_oracle_contraction`].
pub const CONTRACTION_ORACLE_MAX_VERTICES: usize = 7;

/// `τ = ¼ ∫ (∂r(x, y)/∂x)² dx` with `y` at vertex 0, approximated by chord
/// slopes over `segments` equal pieces of every edge.
///
/// Resistances at the cut points are exact: along an edge `r(·, y)` is a
/// quadratic determined by the vertex resistances.
pub fn tau_oracle_integral(g: &MetrizedGraph, segments: usize) -> Result<f64> {
    if segments < 2 {
        return Err(Error::NotApplicable(format!("integral oracle needs at least 2 segments, got {segments}")));
    }
    let a = CircuitAnalysis::new(g)?;
    let m = segments as f64;
    let mut total = 0.0;
    for (k, e) in g.edges().iter().enumerate() {
        let h = e.length / m;
        let mut prev = a.point_resistance(0, EdgeId(k), 0.0);
        for j in 1..=segments {
            let next = a.point_resistance(0, EdgeId(k), j as f64 / m);
            let slope = (next - prev) / h;
            total += slope * slope * h;
            prev = next;
        }
    }
    Ok(total / 4.0)
}

/// `A_{p,q,Γ} = ∫ j_x(p, q) (d/dx j_p(x, q))² dx` by the midpoint rule for
/// the first factor and chord slopes for the derivative.
pub fn a_pq_integral(g: &MetrizedGraph, p: usize, q: usize, segments: usize) -> Result<f64> {
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    if segments < 1 {
        return Err(Error::NotApplicable("need at least one segment".into()));
    }
    let a = CircuitAnalysis::new(g)?;
    let rpq = a.resistance(p, q);
    let m = segments as f64;
    let mut total = 0.0;
    for (k, e) in g.edges().iter().enumerate() {
        let id = EdgeId(k);
        let h = e.length / m;
        // j_p(x, q) = (r(x,p) + r(q,p) - r(x,q)) / 2
        let jp = |s: f64| (a.point_resistance(p, id, s) + rpq - a.point_resistance(q, id, s)) / 2.0;
        // j_x(p, q) = (r(p,x) + r(q,x) - r(p,q)) / 2
        let jx = |s: f64| (a.point_resistance(p, id, s) + a.point_resistance(q, id, s) - rpq) / 2.0;
        for j in 0..segments {
            let (s0, s1) = (j as f64 / m, (j + 1) as f64 / m);
            let slope = (jp(s1) - jp(s0)) / h;
            total += jx((s0 + s1) / 2.0) * slope * slope * h;
        }
    }
    Ok(total)
}

/// Two vertices: parallel edges plus loops at either end.
fn banana_tau(g: &MetrizedGraph) -> f64 {
    let (mut loops, mut parallel, mut conductance, mut n) = (0.0, 0.0, 0.0, 0usize);
    for e in g.edges() {
        if e.is_loop() {
            loops += e.length;
        } else {
            parallel += e.length;
            conductance += 1.0 / e.length;
            n += 1;
        }
    }
    let r = 1.0 / conductance;
    loops / 12.0 + parallel / 12.0 - (n as f64 - 2.0) * r / 6.0
}

struct Recursion<'a> {
    g: &'a MetrizedGraph,
    memo: HashMap<u64, f64>,
}

impl Recursion<'_> {
    fn tau(&mut self, set: u64) -> Result<f64> {
        if let Some(&t) = self.memo.get(&set) {
            return Ok(t);
        }
        let ids: Vec<EdgeId> = (0..self.g.edge_count()).filter(|k| set >> k & 1 == 1).map(EdgeId).collect();
        let s = contract_edges(self.g, &ids)?;
        let h = &s.graph;
        let v = h.vertex_count();
        let t = match v {
            1 => h.total_length() / 12.0,
            2 => banana_tau(h),
            _ => {
                let a = CircuitAnalysis::new(h)?;
                let z = EdgeSums::from_data(&a.all_edge_data(0)).z;
                let mut acc = 0.0;
                for k in 0..self.g.edge_count() {
                    let Some(here) = s.edge(EdgeId(k)) else { continue };
                    let e = h.edges()[here.0];
                    if e.is_loop() {
                        continue;
                    }
                    let weight = a.edge_resistance(here).contraction_weight(e.length);
                    acc += weight * self.tau(set | 1 << k)?;
                }
                let d = (v - 2) as f64;
                acc / d - z / (12.0 * d)
            }
        };
        self.memo.insert(set, t);
        Ok(t)
    }
}

/// `τ` from the contraction recursion
/// `τ(Γ) = (1/(v-2)) Σ R_i/(L_i+R_i) τ(Γ̄_i) - z(Γ)/(12(v-2))`,
/// bottoming out at the closed form for two-vertex graphs.
pub fn tau_oracle_contraction(g: &MetrizedGraph) -> Result<f64> {
    let v = g.vertex_count();
    if v > CONTRACTION_ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge { vertices: v, limit: CONTRACTION_ORACLE_MAX_VERTICES });
    }
    if g.edge_count() > 64 {
        return Err(Error::TooLarge { vertices: v, limit: CONTRACTION_ORACLE_MAX_VERTICES });
    }
    Recursion { g, memo: HashMap::new() }.tau(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::invariants::{a_pq, tau};
    use crate::random::{random_graph, GraphParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integral_examples() {
        assert!((tau_oracle_integral(&cycle(2, 0.5), 64).unwrap() - 1.0 / 12.0).abs() < 1e-3);
        assert!((tau_oracle_integral(&path(3, 1.0 / 3.0), 2).unwrap() - 0.25).abs() < 1e-12);
        let b = banana(&[1.0 / 3.0; 3]);
        assert!((tau_oracle_integral(&b, 64).unwrap() - 7.0 / 108.0).abs() < 1e-3);
    }

    #[test]
    fn integral_converges_quadratically() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_graph(&mut rng, &GraphParams::default());
            let t = tau(&g).unwrap();
            let e32 = (tau_oracle_integral(&g, 32).unwrap() - t).abs();
            let e64 = (tau_oracle_integral(&g, 64).unwrap() - t).abs();
            assert!(e32 <= 1e-12 || e32 / e64 >= 3.0, "{e32} {e64}");
        }
    }

    #[test]
    fn contraction_examples() {
        assert!((tau_oracle_contraction(&cycle(3, 1.0)).unwrap() - 0.25).abs() < 1e-14);
        let b = banana(&[0.3, 1.1, 2.0, 0.7]);
        assert!((tau_oracle_contraction(&b).unwrap() - tau(&b).unwrap()).abs() < 1e-13);
        assert!(matches!(tau_oracle_contraction(&cycle(8, 1.0)), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn a_integral_matches_identity_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let g = random_graph(&mut rng, &GraphParams { max_vertices: 4, max_edges: 7, bridgeless: false });
            for q in 1..g.vertex_count() {
                let via_identity = a_pq(&g, 0, q).unwrap();
                let integral = a_pq_integral(&g, 0, q, 128).unwrap();
                let scale = via_identity.abs().max(1.0);
                assert!((integral - via_identity).abs() <= 5e-3 * scale, "{integral} vs {via_identity}");
            }
        }
        let c = cycle(4, 1.0);
        assert!((a_pq_integral(&c, 0, 2, 128).unwrap() - 16.0 / 96.0).abs() < 1e-3);
    }
}
