//! Edge and vertex connectivity, `N(Γ)`, the lower bounds on `τ` that depend
//! on them, and the margin against `τ > ℓ/108`.

use std::collections::VecDeque;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MetrizedGraph;
use crate::invariants::{tau, xy_of};
use crate::transforms::admissible_contractions;

/// Largest vertex count accepted by [`n_of`].
pub const N_OF_MAX_VERTICES: usize = 7;

/// The constant in the conjectured bound `τ(Γ) > ℓ(Γ)/108`.
pub const CONJECTURE_CONSTANT: f64 = 1.0 / 108.0;

/// Serialized as a bare number, or the string `"INFINITE"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeConnectivity {
    Finite(usize),
    /// Single vertex: removing loops never disconnects.
    Infinite,
}

impl EdgeConnectivity {
    pub fn finite(self) -> Option<usize> {
        match self {
            EdgeConnectivity::Finite(n) => Some(n),
            EdgeConnectivity::Infinite => None,
        }
    }
}

impl Serialize for EdgeConnectivity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EdgeConnectivity::Finite(n) => s.serialize_u64(*n as u64),
            EdgeConnectivity::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for EdgeConnectivity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Finite(usize),
            Named(String),
        }
        match Raw::deserialize(d)? {
            Raw::Finite(n) => Ok(EdgeConnectivity::Finite(n)),
            Raw::Named(s) if s == "INFINITE" => Ok(EdgeConnectivity::Infinite),
            Raw::Named(s) => Err(serde::de::Error::custom(format!("bad edge connectivity `{s}`"))),
        }
    }
}

impl fmt::Display for EdgeConnectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeConnectivity::Finite(n) => write!(f, "{n}"),
            EdgeConnectivity::Infinite => f.write_str("inf"),
        }
    }
}

/// Max flow by shortest augmenting paths on an integer capacity matrix.
fn max_flow(cap: &[Vec<usize>], s: usize, t: usize) -> usize {
    let n = cap.len();
    let mut residual = cap.to_vec();
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for w in 0..n {
                if residual[u][w] > 0 && prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut push = usize::MAX;
        let mut w = t;
        while w != s {
            let u = prev[w];
            push = push.min(residual[u][w]);
            w = u;
        }
        let mut w = t;
        while w != s {
            let u = prev[w];
            residual[u][w] -= push;
            residual[w][u] += push;
            w = u;
        }
        flow += push;
    }
}

/// `Λ(Γ)`: fewest edges whose removal disconnects the graph. Self-loops are
/// ignored and each parallel edge counts separately.
pub fn edge_connectivity(g: &MetrizedGraph) -> EdgeConnectivity {
    let n = g.vertex_count();
    if n == 1 {
        return EdgeConnectivity::Infinite;
    }
    let mut cap = vec![vec![0usize; n]; n];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        cap[e.a][e.b] += 1;
        cap[e.b][e.a] += 1;
    }
    let best = (1..n).map(|t| max_flow(&cap, 0, t)).min().expect("at least two vertices");
    EdgeConnectivity::Finite(best)
}

/// `κ(Γ)`: fewest vertices whose removal disconnects the underlying simple
/// graph, or `v - 1` if every pair of vertices is adjacent.
pub fn vertex_connectivity(g: &MetrizedGraph) -> Result<usize> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(Error::TooSmall { vertices: n });
    }
    let mut adjacent = vec![vec![false; n]; n];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        adjacent[e.a][e.b] = true;
        adjacent[e.b][e.a] = true;
    }
    // Split x into x_in = 2x and x_out = 2x + 1 joined by a unit arc.
    let big = n;
    let mut cap = vec![vec![0usize; 2 * n]; 2 * n];
    for x in 0..n {
        cap[2 * x][2 * x + 1] = 1;
        for y in 0..n {
            if adjacent[x][y] {
                cap[2 * x + 1][2 * y] = big;
            }
        }
    }
    let mut best = n - 1;
    for s in 0..n {
        for t in s + 1..n {
            if !adjacent[s][t] {
                best = best.min(max_flow(&cap, 2 * s + 1, 2 * t));
            }
        }
    }
    Ok(best)
}

/// `N(Γ)`: the fewest parallel edges left by any admissible contraction.
pub fn n_of(g: &MetrizedGraph) -> Result<usize> {
    let v = g.vertex_count();
    if v < 2 {
        return Err(Error::TooSmall { vertices: v });
    }
    if v > N_OF_MAX_VERTICES {
        return Err(Error::TooLarge { vertices: v, limit: N_OF_MAX_VERTICES });
    }
    if let Some(&b) = g.bridges().first() {
        return Err(Error::BridgePresent { edge: b.0 });
    }
    let seqs: Vec<_> = admissible_contractions(g).collect();
    let best = seqs
        .par_iter()
        .map(|s| {
            let mut label: Vec<usize> = (0..v).collect();
            for id in &s.ids {
                let e = g.edges()[id.0];
                let (la, lb) = (label[e.a], label[e.b]);
                label.iter_mut().filter(|l| **l == lb).for_each(|l| *l = la);
            }
            g.edges().iter().filter(|e| label[e.a] != label[e.b]).count()
        })
        .min()
        .expect("v >= 2 gives at least one admissible contraction");
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// One bound evaluated against the actual `τ`. Values are for the graph as
/// given (not normalized). `slack >= 0` means the bound holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub kind: BoundKind,
    pub bound: f64,
    pub tau: f64,
    pub slack: f64,
}

impl BoundCheck {
    fn lower(name: &str, bound: f64, tau: f64) -> Self {
        BoundCheck { name: name.into(), kind: BoundKind::Lower, bound, tau, slack: tau - bound }
    }

    fn upper(name: &str, bound: f64, tau: f64) -> Self {
        BoundCheck { name: name.into(), kind: BoundKind::Upper, bound, tau, slack: bound - tau }
    }

    /// Slack relative to the total length, so checks at different scales compare.
    pub fn holds(&self, ell: f64, tol: f64) -> bool {
        self.slack >= -tol * ell.max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub lambda: EdgeConnectivity,
    /// `None` for a single vertex.
    pub kappa: Option<usize>,
    pub delta: usize,
    pub ell: f64,
    pub tau: f64,
    /// The main theorem: the `Λ >= 4` bound and its `Λ >= 6` / `Λ = 5`
    /// specializations when they apply, and `ℓ/(2(v+6))` always.
    pub bound_main: Vec<BoundCheck>,
    /// `ℓ/(6(g+1))` for bridgeless graphs.
    pub bound_genus: Option<BoundCheck>,
    /// Lower and upper bounds for bridgeless graphs with all lengths equal,
    /// plus the sharper bracket for `n`-regular graphs with `Λ = n`.
    pub bound_equal_length: Vec<BoundCheck>,
    pub conjecture_margin: f64,
}

impl BoundsReport {
    pub fn checks(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bound_main.iter().chain(self.bound_genus.iter()).chain(self.bound_equal_length.iter())
    }

    /// Worst slack over every bound, scaled by `1/ℓ`.
    pub fn worst_relative_slack(&self) -> Option<f64> {
        self.checks().map(|c| c.slack / self.ell).min_by(f64::total_cmp)
    }
}

pub fn conjecture_margin(g: &MetrizedGraph) -> Result<f64> {
    Ok(tau(g)? / g.total_length() - CONJECTURE_CONSTANT)
}

pub fn lower_bounds(g: &MetrizedGraph) -> Result<BoundsReport> {
    let t = tau(g)?;
    bounds_with_tau(g, t)
}

pub(crate) fn bounds_with_tau(g: &MetrizedGraph, t: f64) -> Result<BoundsReport> {
    let ell = g.total_length();
    let v = g.vertex_count() as f64;
    let e = g.edge_count() as f64;
    let lambda = edge_connectivity(g);
    let kappa = if g.vertex_count() >= 2 { Some(vertex_connectivity(g)?) } else { None };
    let bridgeless = g.is_bridgeless();

    let mut main = Vec::new();
    if let EdgeConnectivity::Finite(l) = lambda {
        if l >= 4 {
            let lf = l as f64;
            let c = (1.0 - 4.0 / lf).powi(2) / 12.0 + 4.0 * (lf - 2.0) / ((v + 6.0) * lf * lf);
            main.push(BoundCheck::lower("main_lambda_ge_4", ell * c, t));
        }
        if l >= 6 {
            main.push(BoundCheck::lower("main_lambda_ge_6", ell / 108.0, t));
        }
        if l == 5 {
            main.push(BoundCheck::lower("main_lambda_eq_5", ell / 300.0, t));
        }
    }
    main.push(BoundCheck::lower("main_any", ell / (2.0 * (v + 6.0)), t));

    let bound_genus =
        bridgeless.then(|| BoundCheck::lower("genus", ell / (6.0 * (g.genus() as f64 + 1.0)), t));

    let mut equal = Vec::new();
    if bridgeless && g.vertex_count() >= 2 && g.has_equal_lengths(1e-12) {
        let lf = lambda.finite().expect("v >= 2") as f64;
        let base = 1.0 / 12.0 - (v - 1.0) / (6.0 * e);
        let lo = base + (v + 6.0) / (12.0 * v) * ((v - 1.0) / e).powi(2);
        let hi = base + (v - 1.0) / (3.0 * e * lf);
        equal.push(BoundCheck::lower("equal_length_lower", ell * lo, t));
        equal.push(BoundCheck::upper("equal_length_upper", ell * hi, t));
        if let Some(n) = g.regular_degree() {
            if lambda == EdgeConnectivity::Finite(n) {
                let nf = n as f64;
                let gen = g.genus() as f64;
                let lo = (gen / e).powi(2) / 12.0 + ((v - 1.0) / e).powi(2) / (2.0 * v);
                let hi = 1.0 / 12.0 - (v - 1.0) * (nf - 2.0) / (3.0 * v * nf * nf);
                equal.push(BoundCheck::lower("regular_lower", ell * lo, t));
                equal.push(BoundCheck::upper("regular_upper", ell * hi, t));
            }
        }
    }

    Ok(BoundsReport {
        lambda,
        kappa,
        delta: g.min_valence(),
        ell,
        tau: t,
        bound_main: main,
        bound_genus,
        bound_equal_length: equal,
        conjecture_margin: t / ell - CONJECTURE_CONSTANT,
    })
}

/// Slack of `g·y ≥ x ≥ (Λ - 1)·y` at the two-vertex end of one admissible
/// contraction; returns the smaller of the two slacks.
pub fn banana_xy_slack(banana: &MetrizedGraph, lambda: usize, genus: usize) -> Result<f64> {
    let (x, y) = xy_of(banana, 0)?;
    Ok((genus as f64 * y - x).min(x - (lambda as f64 - 1.0) * y))
}
