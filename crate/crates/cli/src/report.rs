use serde::Serialize;

use taulab::{BoundsReport, IdentityReport, InvariantSet};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    ConjectureViolation,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::ConjectureViolation => 3,
        }
    }

    /// Conjecture violations outrank ordinary failures.
    pub fn worst(self, other: Outcome) -> Outcome {
        let rank = |o: Outcome| match o {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::ConjectureViolation => 2,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<Vec<IdentityReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fuzz: Option<FuzzSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool: "taulab",
            version: env!("CARGO_PKG_VERSION"),
            command,
            outcome: Outcome::Pass,
            input: None,
            seed: None,
            tolerance: None,
            invariants: None,
            bounds: None,
            identities: None,
            fuzz: None,
            oracle: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseRef {
    pub case: usize,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzFailure {
    pub case: usize,
    pub check: String,
    pub detail: String,
    pub graph: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub count: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub bridgeless_only: bool,
    pub identity_checks: usize,
    pub skipped: usize,
    pub worst_residual: Option<CaseRef>,
    /// Smallest inequality slack, divided by `max(1, |lhs|, |rhs|)`.
    pub worst_identity_slack: Option<CaseRef>,
    /// Smallest bound slack divided by `ℓ`.
    pub worst_bound_slack: Option<CaseRef>,
    pub min_conjecture_margin: Option<CaseRef>,
    pub failures: Vec<FuzzFailure>,
    pub conjecture_violations: Vec<FuzzFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub segments: usize,
    pub tau: f64,
    pub tau_integral: f64,
    pub tau_contraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contraction_note: Option<String>,
    pub deviation_integral: f64,
    pub deviation_contraction: Option<f64>,
    pub deviation_integral_contraction: Option<f64>,
    pub integral_tolerance: f64,
    pub contraction_tolerance: f64,
}
