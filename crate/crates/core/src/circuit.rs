//! Electrical-network layer.
//!
//! Each edge is a resistor whose resistance equals its length. Effective
//! resistances come from one dense Cholesky factorization of the weighted
//! Laplacian grounded at vertex 0; parallel edges are merged into a single
//! conductance and self-loops carry no current.
//!
//! Per-edge quantities are measured in `Γ - e_i`. They are not obtained by
//! refactorizing: removing the conductance `1/L_i` is a rank-one update, so
//! for `u = 1_a - 1_b`
//!
//! ```text
//! r̂(x, y) = r(x, y) + d(x, y)² / (L_i - r(a, b)),
//! d(x, y) = (r(x, b) + r(y, a) - r(x, a) - r(y, b)) / 2.
//! ```
//!
//! Bridges are detected combinatorially and never go through that formula;
//! they receive the infinite-resistance conventions of [`ResistanceValue`].

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetrizedGraph};

/// Residual threshold (relative to the unit right-hand sides) above which a
/// Laplacian solve is reported as [`Error::SingularSystem`].
pub const SOLVE_RESIDUAL_LIMIT: f64 = 1e-8;

/// A resistance that may be infinite, which happens exactly when the two
/// probe points lie in different components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ResistanceValue {
    Finite(f64),
    Infinite,
}

impl ResistanceValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            ResistanceValue::Finite(r) => Some(r),
            ResistanceValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ResistanceValue::Infinite)
    }

    /// `R / (L + R)`, taken as 1 when `R` is infinite.
    pub fn contraction_weight(self, length: f64) -> f64 {
        match self {
            ResistanceValue::Finite(r) => r / (length + r),
            ResistanceValue::Infinite => 1.0,
        }
    }

    /// `L / (L + R)`, taken as 0 when `R` is infinite.
    pub fn deletion_weight(self, length: f64) -> f64 {
        match self {
            ResistanceValue::Finite(r) => length / (length + r),
            ResistanceValue::Infinite => 0.0,
        }
    }
}

impl fmt::Display for ResistanceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResistanceValue::Finite(r) => write!(f, "{r}"),
            ResistanceValue::Infinite => f.write_str("inf"),
        }
    }
}

/// All-pairs effective resistances over the vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl ResistanceMatrix {
    pub fn compute(g: &MetrizedGraph) -> Result<Self> {
        let n = g.vertex_count();
        let mut data = vec![0.0; n * n];
        if n == 1 {
            return Ok(ResistanceMatrix { n, data });
        }
        let m = n - 1;
        let mut lap = DMatrix::<f64>::zeros(m, m);
        for e in g.edges() {
            if e.is_loop() {
                continue;
            }
            let c = 1.0 / e.length;
            // Vertex 0 is ground; its row and column are dropped.
            let (ia, ib) = (e.a.checked_sub(1), e.b.checked_sub(1));
            if let Some(i) = ia {
                lap[(i, i)] += c;
            }
            if let Some(j) = ib {
                lap[(j, j)] += c;
            }
            if let (Some(i), Some(j)) = (ia, ib) {
                lap[(i, j)] -= c;
                lap[(j, i)] -= c;
            }
        }
        let green = lap
            .clone()
            .cholesky()
            .ok_or(Error::SingularSystem { residual: f64::INFINITY })?
            .inverse();
        let check = &lap * &green;
        let mut residual: f64 = 0.0;
        for i in 0..m {
            for j in 0..m {
                let target = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((check[(i, j)] - target).abs());
            }
        }
        if !(residual <= SOLVE_RESIDUAL_LIMIT) {
            return Err(Error::SingularSystem { residual });
        }
        let gr = |x: usize, y: usize| -> f64 {
            if x == 0 || y == 0 {
                0.0
            } else {
                green[(x - 1, y - 1)]
            }
        };
        for x in 0..n {
            for y in x + 1..n {
                let r = (gr(x, x) + gr(y, y) - 2.0 * gr(x, y)).max(0.0);
                data[x * n + y] = r;
                data[y * n + x] = r;
            }
        }
        Ok(ResistanceMatrix { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.n + y]
    }

    /// Row-major copy, mostly for reports.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|c| c.to_vec()).collect()
    }
}

/// Circuit quantities of one edge `e_i = (p_i, q_i)` measured in `Γ - e_i`,
/// with respect to a base vertex `p`.
///
/// `arm_a`, `arm_b`, `arm_c` are the arms of the Y-network equivalent to
/// `Γ - e_i` seen from `p_i`, `q_i` and `p`. For a bridge exactly one of
/// `arm_a`, `arm_b` is infinite: the arm towards the endpoint on the far
/// side from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeCircuitData {
    pub edge: EdgeId,
    pub length: f64,
    pub resistance: ResistanceValue,
    pub arm_a: ResistanceValue,
    pub arm_b: ResistanceValue,
    /// Arm towards the base vertex. Exposed for inspection only.
    pub arm_c: f64,
    pub base: usize,
}

impl EdgeCircuitData {
    pub fn is_bridge(&self) -> bool {
        self.resistance.is_infinite()
    }

    /// `L (R_a - R_b)² / (L + R)²`, whose limit for a bridge is `L`.
    pub fn arm_skew_term(&self) -> f64 {
        match (self.resistance, self.arm_a, self.arm_b) {
            (ResistanceValue::Finite(r), ResistanceValue::Finite(ra), ResistanceValue::Finite(rb)) => {
                let s = self.length + r;
                self.length * (ra - rb) * (ra - rb) / (s * s)
            }
            _ => self.length,
        }
    }

    /// `L R² / (L + R)²`, whose limit for a bridge is `L`.
    pub fn resistance_square_term(&self) -> f64 {
        match self.resistance {
            ResistanceValue::Finite(r) => {
                let s = self.length + r;
                self.length * r * r / (s * s)
            }
            ResistanceValue::Infinite => self.length,
        }
    }

    /// `L² R / (L + R)²`, whose limit for a bridge is 0.
    pub fn mixed_term(&self) -> f64 {
        match self.resistance {
            ResistanceValue::Finite(r) => {
                let s = self.length + r;
                self.length * self.length * r / (s * s)
            }
            ResistanceValue::Infinite => 0.0,
        }
    }

    /// `L² / (L + R)`; 0 for a bridge.
    pub fn z_term(&self) -> f64 {
        self.length * self.resistance.deletion_weight(self.length)
    }

    /// `L R / (L + R)`; `L` for a bridge.
    pub fn r_term(&self) -> f64 {
        self.length * self.resistance.contraction_weight(self.length)
    }

    pub fn contraction_weight(&self) -> f64 {
        self.resistance.contraction_weight(self.length)
    }

    pub fn deletion_weight(&self) -> f64 {
        self.resistance.deletion_weight(self.length)
    }
}

/// A graph together with its factorized resistance data. Read-only after
/// construction, so it can be shared freely.
#[derive(Debug, Clone)]
pub struct CircuitAnalysis {
    graph: MetrizedGraph,
    resistance: ResistanceMatrix,
    bridge: Vec<bool>,
    /// For bridges: component labels of `Γ - e_i`.
    bridge_sides: Vec<Option<Vec<usize>>>,
}

impl CircuitAnalysis {
    pub fn new(g: &MetrizedGraph) -> Result<Self> {
        let resistance = ResistanceMatrix::compute(g)?;
        let bridge = g.bridge_flags();
        let bridge_sides = bridge
            .iter()
            .enumerate()
            .map(|(i, &b)| b.then(|| g.components_without(Some(EdgeId(i))).1))
            .collect();
        Ok(CircuitAnalysis { graph: g.clone(), resistance, bridge, bridge_sides })
    }

    pub fn graph(&self) -> &MetrizedGraph {
        &self.graph
    }

    pub fn resistance_matrix(&self) -> &ResistanceMatrix {
        &self.resistance
    }

    pub fn resistance(&self, x: usize, y: usize) -> f64 {
        self.resistance.get(x, y)
    }

    /// `j_z(x, y)`: voltage at `x` (reference `z`) for unit current entering
    /// at `y` and leaving at `z`.
    pub fn voltage(&self, z: usize, x: usize, y: usize) -> f64 {
        let r = &self.resistance;
        (r.get(x, z) + r.get(y, z) - r.get(x, y)) / 2.0
    }

    pub fn is_bridge(&self, i: EdgeId) -> bool {
        self.bridge[i.0]
    }

    /// Resistance in `Γ - e_i` between arbitrary vertices, for a non-bridge
    /// edge.
    fn deleted_resistance(&self, i: usize, x: usize, y: usize) -> f64 {
        let e = &self.graph.edges()[i];
        let r = &self.resistance;
        if e.is_loop() {
            return r.get(x, y);
        }
        let (a, b) = (e.a, e.b);
        let denom = e.length - r.get(a, b);
        let d = (r.get(x, b) + r.get(y, a) - r.get(x, a) - r.get(y, b)) / 2.0;
        r.get(x, y) + d * d / denom
    }

    /// `R_i`: resistance between the endpoints of `e_i` in `Γ - e_i`.
    pub fn edge_resistance(&self, i: EdgeId) -> ResistanceValue {
        let e = &self.graph.edges()[i.0];
        if e.is_loop() {
            ResistanceValue::Finite(0.0)
        } else if self.bridge[i.0] {
            ResistanceValue::Infinite
        } else {
            let r = self.resistance.get(e.a, e.b);
            ResistanceValue::Finite(e.length * r / (e.length - r))
        }
    }

    pub fn edge_data(&self, i: EdgeId, base: usize) -> EdgeCircuitData {
        use ResistanceValue::{Finite, Infinite};
        let e = &self.graph.edges()[i.0];
        let (a, b) = (e.a, e.b);
        let length = e.length;
        if e.is_loop() {
            return EdgeCircuitData {
                edge: i,
                length,
                resistance: Finite(0.0),
                arm_a: Finite(0.0),
                arm_b: Finite(0.0),
                arm_c: self.resistance.get(base, a),
                base,
            };
        }
        if let Some(side) = &self.bridge_sides[i.0] {
            let near_a = side[base] == side[a];
            let (arm_a, arm_b, arm_c) = if near_a {
                (Finite(0.0), Infinite, self.resistance.get(base, a))
            } else {
                (Infinite, Finite(0.0), self.resistance.get(base, b))
            };
            return EdgeCircuitData { edge: i, length, resistance: Infinite, arm_a, arm_b, arm_c, base };
        }
        let rab = self.deleted_resistance(i.0, a, b);
        let rpa = self.deleted_resistance(i.0, base, a);
        let rpb = self.deleted_resistance(i.0, base, b);
        let ra = ((rpa + rab - rpb) / 2.0).max(0.0);
        let rb = ((rab + rpb - rpa) / 2.0).max(0.0);
        let rc = ((rpa + rpb - rab) / 2.0).max(0.0);
        EdgeCircuitData {
            edge: i,
            length,
            resistance: Finite(rab),
            arm_a: Finite(ra),
            arm_b: Finite(rb),
            arm_c: rc,
            base,
        }
    }

    pub fn all_edge_data(&self, base: usize) -> Vec<EdgeCircuitData> {
        self.graph.edge_ids().map(|i| self.edge_data(i, base)).collect()
    }

    /// Resistance from vertex `p` to the point of edge `i` at fraction `s`
    /// of the way from its `a` end to its `b` end.
    ///
    /// Along an edge the resistance is the linear interpolation of the
    /// endpoint values plus `s (1 - s) (L - r(a, b))`.
    pub fn point_resistance(&self, p: usize, i: EdgeId, s: f64) -> f64 {
        let e = &self.graph.edges()[i.0];
        let r = &self.resistance;
        let bulge = e.length - r.get(e.a, e.b);
        (1.0 - s) * r.get(p, e.a) + s * r.get(p, e.b) + s * (1.0 - s) * bulge
    }

    /// `max { r(p, x) : x ∈ Γ }` over the whole metric graph, edge interiors
    /// included.
    pub fn max_resistance_from(&self, p: usize) -> f64 {
        let mut best: f64 = 0.0;
        for (k, e) in self.graph.edges().iter().enumerate() {
            let r = &self.resistance;
            let (ra, rb) = (r.get(p, e.a), r.get(p, e.b));
            let bulge = e.length - r.get(e.a, e.b);
            best = best.max(ra).max(rb);
            if bulge > 0.0 {
                let s = (((rb - ra) / bulge + 1.0) / 2.0).clamp(0.0, 1.0);
                best = best.max(self.point_resistance(p, EdgeId(k), s));
            }
        }
        best
    }
}

pub fn resistance_matrix(g: &MetrizedGraph) -> Result<ResistanceMatrix> {
    ResistanceMatrix::compute(g)
}

pub fn effective_resistance(g: &MetrizedGraph, x: usize, y: usize) -> Result<ResistanceValue> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Ok(ResistanceValue::Finite(0.0));
    }
    Ok(ResistanceValue::Finite(ResistanceMatrix::compute(g)?.get(x, y)))
}

/// `j_z(x, y) = (r(x, z) + r(y, z) - r(x, y)) / 2`.
pub fn voltage_j(g: &MetrizedGraph, z: usize, x: usize, y: usize) -> Result<f64> {
    for v in [z, x, y] {
        g.check_vertex(v)?;
    }
    Ok(CircuitAnalysis::new(g)?.voltage(z, x, y))
}

pub fn edge_circuit_data(g: &MetrizedGraph, i: EdgeId, base: usize) -> Result<EdgeCircuitData> {
    g.edge(i)?;
    g.check_vertex(base)?;
    Ok(CircuitAnalysis::new(g)?.edge_data(i, base))
}
