//! Tau constant and electrical invariants of metrized graphs.
//!
//! A metrized graph is a finite connected multigraph whose edges carry
//! positive lengths; read as a resistor network it has effective
//! resistances, and from those the tau constant `τ(Γ)` and a family of
//! auxiliary invariants. This crate computes them, checks a catalog of
//! contraction / deletion identities between them, and evaluates
//! connectivity-based lower bounds on `τ`.
//!
//! ```
//! use taulab::{graph::families::cycle, invariants::tau};
//! let t = tau(&cycle(3, 1.0)).unwrap();
//! assert!((t - 0.25).abs() < 1e-12);
//! ```

pub mod circuit;
pub mod connectivity;
pub mod error;
pub mod format;
pub mod graph;
pub mod identities;
pub mod invariants;
pub mod random;
pub mod transforms;

pub use circuit::{CircuitAnalysis, EdgeCircuitData, ResistanceMatrix, ResistanceValue};
pub use connectivity::{BoundsReport, EdgeConnectivity};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, MetrizedGraph};
pub use identities::{IdentityId, IdentityReport};
pub use invariants::InvariantSet;
