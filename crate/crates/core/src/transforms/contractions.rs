use crate::error::Result;
use crate::graph::{EdgeId, MetrizedGraph};

use super::surgery::{contract_edges, Surgery};

/// An ordered list of contracted edges, all given as ids of the original
/// graph. Contracting a set gives the same graph regardless of order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractionSequence {
    pub ids: Vec<EdgeId>,
}

impl ContractionSequence {
    pub fn apply(&self, g: &MetrizedGraph) -> Result<Surgery> {
        contract_edges(g, &self.ids)
    }
}

/// Iterator over all admissible contractions of a graph: ordered sequences
/// of `v - 2` edges, each joining distinct vertices at the moment it is
/// contracted. Yields in lexicographic order of original edge ids.
#[derive(Debug, Clone)]
pub struct AdmissibleContractions {
    ends: Vec<(usize, usize)>,
    vertices: usize,
    depth: usize,
    chosen: Vec<usize>,
    cursor: Vec<usize>,
    done: bool,
}

impl AdmissibleContractions {
    fn new(g: &MetrizedGraph) -> Self {
        let v = g.vertex_count();
        let depth = v.saturating_sub(2);
        AdmissibleContractions {
            ends: g.edges().iter().map(|e| (e.a, e.b)).collect(),
            vertices: v,
            depth,
            chosen: Vec::with_capacity(depth),
            cursor: vec![0; depth + 1],
            done: v < 2,
        }
    }

    fn labels(&self) -> Vec<usize> {
        let mut label: Vec<usize> = (0..self.vertices).collect();
        for &k in &self.chosen {
            let (a, b) = self.ends[k];
            let (la, lb) = (label[a], label[b]);
            for l in label.iter_mut() {
                if *l == lb {
                    *l = la;
                }
            }
        }
        label
    }
}

impl Iterator for AdmissibleContractions {
    type Item = ContractionSequence;

    fn next(&mut self) -> Option<ContractionSequence> {
        loop {
            if self.done {
                return None;
            }
            let level = self.chosen.len();
            if level == self.depth {
                let out = ContractionSequence { ids: self.chosen.iter().map(|&k| EdgeId(k)).collect() };
                if self.chosen.pop().is_none() {
                    self.done = true;
                }
                return Some(out);
            }
            let label = self.labels();
            let found = (self.cursor[level]..self.ends.len()).find(|&k| {
                let (a, b) = self.ends[k];
                label[a] != label[b]
            });
            match found {
                Some(k) => {
                    self.cursor[level] = k + 1;
                    self.chosen.push(k);
                    self.cursor[level + 1] = 0;
                }
                None if level == 0 => self.done = true,
                None => {
                    self.chosen.pop();
                }
            }
        }
    }
}

pub fn admissible_contractions(g: &MetrizedGraph) -> AdmissibleContractions {
    AdmissibleContractions::new(g)
}
