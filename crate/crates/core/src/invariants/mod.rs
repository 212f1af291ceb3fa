//! Scalar invariants: `z, r, x, y, w, K_i, A_{p,q}` and the tau constant,
//! plus two independent tau oracles.
//!
//! With `R_i`, `R_a`, `R_b` as in [`crate::circuit::EdgeCircuitData`]:
//!
//! ```text
//! z = Σ L²/(L+R)          r = Σ LR/(L+R)
//! y = ¼ Σ LR²/(L+R)² + ¾ Σ L(R_a-R_b)²/(L+R)²
//! x = Σ L²R/(L+R)² + ¾ Σ LR²/(L+R)² - ¾ Σ L(R_a-R_b)²/(L+R)²
//! τ = ℓ/12 - x/6 + y/6
//! ```
//!
//! A bridge contributes `L` to `r` and `y` and nothing to `z` and `x`.

mod nested;
mod oracles;

use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitAnalysis, EdgeCircuitData};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetrizedGraph};
use crate::transforms::{contract_edge, delete_edge, identify_points};

pub use nested::{nested_contraction_sum, NESTED_MAX_EDGES};
pub use oracles::{a_pq_integral, tau_oracle_contraction, tau_oracle_integral, CONTRACTION_ORACLE_MAX_VERTICES};

/// Per-edge sums from which every invariant at one base vertex is built.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EdgeSums {
    /// `Σ L²/(L+R)`
    pub z: f64,
    /// `Σ LR/(L+R)`
    pub r: f64,
    /// `Σ LR²/(L+R)²`
    pub square: f64,
    /// `Σ L²R/(L+R)²`
    pub mixed: f64,
    /// `Σ L(R_a-R_b)²/(L+R)²`
    pub skew: f64,
}

impl EdgeSums {
    pub fn from_data(data: &[EdgeCircuitData]) -> Self {
        let mut s = EdgeSums::default();
        for d in data {
            s.z += d.z_term();
            s.r += d.r_term();
            s.square += d.resistance_square_term();
            s.mixed += d.mixed_term();
            s.skew += d.arm_skew_term();
        }
        s
    }

    pub fn x(&self) -> f64 {
        self.mixed + 0.75 * self.square - 0.75 * self.skew
    }

    pub fn y(&self) -> f64 {
        0.25 * self.square + 0.75 * self.skew
    }
}

/// All invariants of one graph at one base vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub ell: f64,
    pub genus: usize,
    pub vertices: usize,
    pub edges: usize,
    pub tau: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub r: f64,
    /// Only defined for bridgeless graphs.
    pub w: Option<f64>,
    pub base: usize,
}

impl InvariantSet {
    pub fn compute(g: &MetrizedGraph, base: usize) -> Result<Self> {
        g.check_vertex(base)?;
        let a = CircuitAnalysis::new(g)?;
        Ok(Self::from_analysis(&a, base))
    }

    pub fn from_analysis(a: &CircuitAnalysis, base: usize) -> Self {
        let g = a.graph();
        let s = EdgeSums::from_data(&a.all_edge_data(base));
        let ell = g.total_length();
        let (x, y) = (s.x(), s.y());
        let v = g.vertex_count();
        let w = (g.is_bridgeless() && v >= 2).then_some((v as f64 - 1.0) * s.z - x);
        InvariantSet {
            ell,
            genus: g.genus(),
            vertices: v,
            edges: g.edge_count(),
            tau: ell / 12.0 - x / 6.0 + y / 6.0,
            x,
            y,
            z: s.z,
            r: s.r,
            w,
            base,
        }
    }
}

pub fn z_of(g: &MetrizedGraph) -> Result<f64> {
    Ok(EdgeSums::from_data(&CircuitAnalysis::new(g)?.all_edge_data(0)).z)
}

pub fn r_of(g: &MetrizedGraph) -> Result<f64> {
    Ok(EdgeSums::from_data(&CircuitAnalysis::new(g)?.all_edge_data(0)).r)
}

pub fn xy_of(g: &MetrizedGraph, p: usize) -> Result<(f64, f64)> {
    g.check_vertex(p)?;
    let s = EdgeSums::from_data(&CircuitAnalysis::new(g)?.all_edge_data(p));
    Ok((s.x(), s.y()))
}

/// `τ` at a chosen base vertex.
pub fn tau_at(g: &MetrizedGraph, p: usize) -> Result<f64> {
    g.check_vertex(p)?;
    let a = CircuitAnalysis::new(g)?;
    Ok(tau_from(&a, p))
}

pub(crate) fn tau_from(a: &CircuitAnalysis, p: usize) -> f64 {
    let s = EdgeSums::from_data(&a.all_edge_data(p));
    a.graph().total_length() / 12.0 - s.x() / 6.0 + s.y() / 6.0
}

/// The tau constant, evaluated at base vertex 0. Debug builds also evaluate
/// it at the last vertex and check the two agree.
pub fn tau(g: &MetrizedGraph) -> Result<f64> {
    let a = CircuitAnalysis::new(g)?;
    let t = tau_from(&a, 0);
    if cfg!(debug_assertions) && g.vertex_count() > 1 {
        let other = tau_from(&a, g.vertex_count() - 1);
        let scale = t.abs().max(other.abs()).max(g.total_length()).max(1.0);
        debug_assert!((t - other).abs() <= 1e-7 * scale, "tau depends on base vertex: {t} vs {other}");
    }
    Ok(t)
}

/// `K_i(Γ)` by its definition and by the contraction formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KValue {
    pub value: f64,
    pub via_contraction: f64,
}

impl KValue {
    pub fn residual(&self) -> f64 {
        (self.value - self.via_contraction).abs() / self.value.abs().max(self.via_contraction.abs()).max(1.0)
    }
}

/// `K_i(Γ) = Σ_{j≠i} L_j²/(L_j+R_j) - Σ_j L_j²/(L_j+R_j(Γ-e_i))`.
pub fn k_of(g: &MetrizedGraph, i: EdgeId) -> Result<KValue> {
    g.edge(i)?;
    if let Some(&b) = g.bridges().first() {
        return Err(Error::BridgePresent { edge: b.0 });
    }
    let a = CircuitAnalysis::new(g)?;
    let data = a.all_edge_data(0);
    let z_minus_i: f64 = data.iter().filter(|d| d.edge != i).map(|d| d.z_term()).sum();
    let deleted = delete_edge(g, i)?.graph;
    let z_deleted = z_of(&deleted)?;
    let contracted = contract_edge(g, i)?.graph;
    let weight = data[i.0].contraction_weight();
    let via_contraction = if weight == 0.0 { 0.0 } else { weight * (z_of(&contracted)? - z_deleted) };
    Ok(KValue { value: z_minus_i - z_deleted, via_contraction })
}

/// `A_{p,q,Γ}` through `τ(Γ_pq) = τ(Γ) - r(p,q)/6 + A_{p,q,Γ}/r(p,q)`.
pub fn a_pq(g: &MetrizedGraph, p: usize, q: usize) -> Result<f64> {
    let glued = identify_points(g, p, q)?.graph;
    let a = CircuitAnalysis::new(g)?;
    let r = a.resistance(p, q);
    Ok(r * (tau(&glued)? - tau_from(&a, 0) + r / 6.0))
}

/// `r(p,q) (r_Γ(p) - r(p,q)/2)`, the upper bound for `A_{p,q,Γ}`.
pub fn a_pq_upper_bound(g: &MetrizedGraph, p: usize, q: usize) -> Result<f64> {
    g.check_vertex(p)?;
    g.check_vertex(q)?;
    let a = CircuitAnalysis::new(g)?;
    let r = a.resistance(p, q);
    Ok(r * (a.max_resistance_from(p) - r / 2.0))
}

/// `w(Γ) = (v-1) z(Γ) - x(Γ)`.
pub fn w_of(g: &MetrizedGraph) -> Result<f64> {
    if let Some(&b) = g.bridges().first() {
        return Err(Error::BridgePresent { edge: b.0 });
    }
    if g.vertex_count() < 2 {
        return Err(Error::TooSmall { vertices: g.vertex_count() });
    }
    let s = EdgeSums::from_data(&CircuitAnalysis::new(g)?.all_edge_data(0));
    Ok((g.vertex_count() as f64 - 1.0) * s.z - s.x())
}

/// `w(Γ)` from its nested-sum definition over admissible contractions.
pub fn w_nested(g: &MetrizedGraph) -> Result<f64> {
    if let Some(&b) = g.bridges().first() {
        return Err(Error::BridgePresent { edge: b.0 });
    }
    let v = g.vertex_count();
    if v < 2 {
        return Err(Error::TooSmall { vertices: v });
    }
    let total = nested_contraction_sum(g, v - 2, |h, _| {
        let a = CircuitAnalysis::new(h)?;
        Ok(a.all_edge_data(0)
            .iter()
            .map(|d| {
                let r = d.resistance.finite().expect("banana of a bridgeless graph has no bridge");
                d.length.powi(3) / (d.length + r).powi(2)
            })
            .sum())
    })?;
    Ok(total / factorial(v - 2))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
