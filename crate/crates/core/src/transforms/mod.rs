//! Graph surgeries: deletion, contraction, identification, attachment,
//! doubling, subdivision, admissible contraction sequences and the two
//! reductions towards cubic / 3-edge-connected graphs.
//!
//! Every surgery returns a [`Surgery`] carrying the old-to-new edge and
//! vertex maps. Merged vertices are relabeled by the rank of their smallest
//! original member; surviving edges keep their relative order.

mod contractions;
mod reductions;
mod surgery;

pub use contractions::{admissible_contractions, AdmissibleContractions, ContractionSequence};
pub use reductions::{cubic_transform, reduce_edge_connectivity_two, CubicStep, CubicTransform, Reduction, ReductionStep};
pub use surgery::{
    attach_edge, contract_edge, contract_edges, delete_edge, double_adjusted, identify_endpoints, identify_points,
    subdivide, Subdivision, Surgery,
};
