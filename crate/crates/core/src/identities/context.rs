use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::circuit::{CircuitAnalysis, EdgeCircuitData};
use crate::connectivity::{edge_connectivity, EdgeConnectivity};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetrizedGraph};
use crate::invariants::{InvariantSet, NESTED_MAX_EDGES};
use crate::transforms::{contract_edge, contract_edges, delete_edge, Surgery};

/// A surgery result together with its invariants at the image of vertex 0.
#[derive(Debug, Clone)]
pub struct Side {
    pub surgery: Surgery,
    pub inv: InvariantSet,
}

impl Side {
    fn new(surgery: Surgery) -> Result<Self> {
        let inv = InvariantSet::compute(&surgery.graph, surgery.vertex(0))?;
        Ok(Side { surgery, inv })
    }
}

/// A graph reached by contracting a set of original edges.
#[derive(Debug)]
pub struct Level {
    pub graph: MetrizedGraph,
    pub inv: InvariantSet,
    /// `(original edge, R/(L+R) in this graph)` for every surviving non-loop edge.
    pub weights: Vec<(usize, f64)>,
    /// Resistance between the two vertices, when there are exactly two.
    pub pair_resistance: Option<f64>,
    /// Non-loop edges.
    pub parallel: usize,
}

/// Everything the identities share about one graph: its circuit data and
/// the one-edge deletions and contractions, computed once.
pub struct Context {
    pub g: MetrizedGraph,
    pub analysis: CircuitAnalysis,
    /// Per-edge data at base vertex 0.
    pub data: Vec<EdgeCircuitData>,
    pub inv: InvariantSet,
    pub bridgeless: bool,
    pub contracted: Vec<Side>,
    /// `None` for bridges.
    pub deleted: Vec<Option<Side>>,
    lambda: OnceLock<EdgeConnectivity>,
    levels: Mutex<HashMap<u64, Arc<Level>>>,
}

impl Context {
    pub fn new(g: &MetrizedGraph) -> Result<Self> {
        let analysis = CircuitAnalysis::new(g)?;
        let data = analysis.all_edge_data(0);
        let inv = InvariantSet::from_analysis(&analysis, 0);
        let mut contracted = Vec::with_capacity(g.edge_count());
        let mut deleted = Vec::with_capacity(g.edge_count());
        for i in g.edge_ids() {
            contracted.push(Side::new(contract_edge(g, i)?)?);
            deleted.push(if data[i.0].is_bridge() { None } else { Some(Side::new(delete_edge(g, i)?)?) });
        }
        Ok(Context {
            g: g.clone(),
            bridgeless: g.is_bridgeless(),
            analysis,
            data,
            inv,
            contracted,
            deleted,
            lambda: OnceLock::new(),
            levels: Mutex::new(HashMap::new()),
        })
    }

    pub fn v(&self) -> usize {
        self.g.vertex_count()
    }

    pub fn lambda(&self) -> EdgeConnectivity {
        *self.lambda.get_or_init(|| edge_connectivity(&self.g))
    }

    /// The graph with every edge in `set` contracted (cached).
    pub fn level(&self, set: u64) -> Result<Arc<Level>> {
        if let Some(l) = self.levels.lock().expect("level cache poisoned").get(&set) {
            return Ok(Arc::clone(l));
        }
        let ids: Vec<EdgeId> = (0..self.g.edge_count()).filter(|k| set >> k & 1 == 1).map(EdgeId).collect();
        let s = contract_edges(&self.g, &ids)?;
        let a = CircuitAnalysis::new(&s.graph)?;
        let mut weights = Vec::new();
        for k in 0..self.g.edge_count() {
            let Some(here) = s.edge(EdgeId(k)) else { continue };
            let e = s.graph.edges()[here.0];
            if !e.is_loop() {
                weights.push((k, a.edge_resistance(here).contraction_weight(e.length)));
            }
        }
        let level = Arc::new(Level {
            inv: InvariantSet::from_analysis(&a, s.vertex(0)),
            pair_resistance: (s.graph.vertex_count() == 2).then(|| a.resistance(0, 1)),
            parallel: weights.len(),
            weights,
            graph: s.graph,
        });
        self.levels.lock().expect("level cache poisoned").insert(set, Arc::clone(&level));
        Ok(level)
    }

    /// Depth-`k` nested contraction sum of `leaf` with weights `R/(L+R)`
    /// taken in the graph contracted so far. `leaf` gets the final graph and
    /// the mask of contracted original edges.
    pub fn nested(&self, k: usize, leaf: &dyn Fn(&Level, u64) -> f64) -> Result<f64> {
        if self.g.edge_count() > NESTED_MAX_EDGES {
            return Err(Error::TooLarge { vertices: self.v(), limit: NESTED_MAX_EDGES });
        }
        let mut memo = HashMap::new();
        self.nested_at(0, k, leaf, &mut memo)
    }

    fn nested_at(&self, set: u64, left: usize, leaf: &dyn Fn(&Level, u64) -> f64, memo: &mut HashMap<u64, f64>) -> Result<f64> {
        if let Some(&v) = memo.get(&set) {
            return Ok(v);
        }
        let level = self.level(set)?;
        let out = if left == 0 {
            leaf(&level, set)
        } else {
            let mut acc = 0.0;
            for &(k, w) in &level.weights {
                acc += w * self.nested_at(set | 1 << k, left - 1, leaf, memo)?;
            }
            acc
        };
        memo.insert(set, out);
        Ok(out)
    }
}
