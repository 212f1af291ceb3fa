//! Registry of identities and inequalities between the invariants, each
//! evaluated on a concrete graph as a left side, a right side and a residual.
//!
//! Equalities pass when `|lhs - rhs| / max(1, |lhs|, |rhs|) <= tol`.
//! Inequalities are stored as `lhs >= rhs` and pass when the slack
//! `lhs - rhs`, divided by the same scale, is at least `-tol`. Identities
//! quantified over edges or depths are checked at every instance and report
//! the worst one.

mod catalog;
mod context;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MetrizedGraph;

pub use context::Context;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Vertex cap for identities built on nested contraction sums.
pub const NESTED_MAX_VERTICES: usize = 6;

macro_rules! identity_ids {
    ($($variant:ident => $name:literal, $applies:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum IdentityId {
            $($variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $name,)*
                }
            }

            /// Hypotheses under which the identity is evaluated.
            pub fn applicability(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $applies,)*
                }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(IdentityId::$variant),)*
                    other => Err(Error::UnknownIdentityId(other.to_string())),
                }
            }
        }
    };
}

identity_ids! {
    Genus => "GENUS", "any graph";
    TauContract => "TAU_CONTRACT", "v >= 3";
    TauGenus => "TAU_GENUS", "bridgeless";
    TauGenusLb => "TAU_GENUS_LB", "bridgeless";
    ContDelTau => "CONT_DEL_TAU", "per non-bridge edge";
    DaTau => "DA_TAU", "any graph";
    DelIdDa => "DEL_ID_DA", "bridgeless, per edge";
    DelIdA => "DEL_ID_A", "bridgeless, per edge";
    KNonneg => "K_NONNEG", "bridgeless, per edge";
    KContract => "K_CONTRACT", "bridgeless, per edge";
    CdX => "CD_X", "per non-bridge edge";
    CdY => "CD_Y", "per non-bridge edge";
    CdZ => "CD_Z", "per non-bridge edge";
    CdR => "CD_R", "per non-bridge edge";
    ApqContract => "APQ_CONTRACT", "per non-bridge, non-loop edge";
    EulerZ => "EULER_Z", "bridgeless";
    EulerXy => "EULER_XY", "bridgeless";
    ContrX => "CONTR_X", "bridgeless, v >= 3";
    ContrY => "CONTR_Y", "bridgeless, v >= 3";
    ContrZ => "CONTR_Z", "bridgeless, v >= 2";
    ContrR => "CONTR_R", "bridgeless, v >= 3";
    DelX => "DEL_X", "bridgeless";
    DelY => "DEL_Y", "bridgeless";
    DelZ => "DEL_Z", "bridgeless";
    DelR => "DEL_R", "bridgeless";
    TauContr2 => "TAU_CONTR2", "bridgeless, v >= 3";
    TauDel2 => "TAU_DEL2", "bridgeless, g >= 1";
    SuccXy => "SUCC_XY", "bridgeless, 3 <= v <= 6, all k with k + 2 <= v";
    SuccTau => "SUCC_TAU", "bridgeless, 3 <= v <= 6, all k with k + 2 <= v";
    SuccR => "SUCC_R", "bridgeless, 3 <= v <= 6, all k with k + 2 <= v";
    SuccRBounds => "SUCC_R_BOUNDS", "bridgeless, v >= 3, all k with k + 2 <= v";
    SuccZ => "SUCC_Z", "bridgeless, 2 <= v <= 6, all k with k + 1 <= v";
    BananaXy => "BANANA_XY", "bridgeless, 2 <= v <= 6, every admissible contraction";
    TauMain5 => "TAU_MAIN5", "bridgeless, 3 <= v <= 6";
    WId => "W_ID", "bridgeless, 2 <= v <= 6";
    ZXBound => "Z_X_BOUND", "bridgeless, v >= 2";
    Ahm => "AHM", "bridgeless, 2 <= v <= 6, every admissible contraction";
    Norm2term => "NORM2TERM", "evaluated on the normalization";
    ValPartition => "VAL_PARTITION", "any graph";
    Edgecon11 => "EDGECON11", "bridgeless, v >= 2, evaluated on the normalization";
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Equality,
    /// `lhs >= rhs`.
    Inequality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One evaluated instance of an identity.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Instance {
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub note: String,
}

impl Instance {
    pub fn eq(lhs: f64, rhs: f64, note: impl Into<String>) -> Self {
        Instance { kind: CheckKind::Equality, lhs, rhs, note: note.into() }
    }

    pub fn ge(lhs: f64, rhs: f64, note: impl Into<String>) -> Self {
        Instance { kind: CheckKind::Inequality, lhs, rhs, note: note.into() }
    }

    fn scale(&self) -> f64 {
        self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }

    /// Normalized violation: the residual for equalities, the relative
    /// deficit (negative when satisfied) for inequalities.
    fn badness(&self) -> f64 {
        let d = match self.kind {
            CheckKind::Equality => (self.lhs - self.rhs).abs(),
            CheckKind::Inequality => self.rhs - self.lhs,
        };
        if d.is_nan() {
            f64::INFINITY
        } else {
            d / self.scale()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub status: Status,
    pub kind: Option<CheckKind>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// Equalities: `|lhs - rhs| / max(1, |lhs|, |rhs|)`.
    pub residual: Option<f64>,
    /// Inequalities: `lhs - rhs`.
    pub slack: Option<f64>,
    pub tolerance: f64,
    pub applicability: String,
    /// Which instance is reported (the worst one), or why it was skipped.
    pub note: String,
    pub instances: usize,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn is_skipped(&self) -> bool {
        self.status == Status::Skipped
    }

    fn skipped(id: IdentityId, tol: f64, reason: String) -> Self {
        IdentityReport {
            id,
            status: Status::Skipped,
            kind: None,
            lhs: None,
            rhs: None,
            residual: None,
            slack: None,
            tolerance: tol,
            applicability: id.applicability().to_string(),
            note: reason,
            instances: 0,
        }
    }

    fn from_instances(id: IdentityId, tol: f64, instances: Vec<Instance>) -> Self {
        let count = instances.len();
        let worst = instances
            .into_iter()
            .max_by(|a, b| a.badness().total_cmp(&b.badness()))
            .expect("every applicable identity has an instance");
        let bad = worst.badness();
        let pass = bad <= tol;
        let (residual, slack) = match worst.kind {
            CheckKind::Equality => (Some(bad), None),
            CheckKind::Inequality => (None, Some(worst.lhs - worst.rhs)),
        };
        IdentityReport {
            id,
            status: if pass { Status::Pass } else { Status::Fail },
            kind: Some(worst.kind),
            lhs: Some(worst.lhs),
            rhs: Some(worst.rhs),
            residual,
            slack,
            tolerance: tol,
            applicability: id.applicability().to_string(),
            note: worst.note,
            instances: count,
        }
    }
}

/// Evaluate one identity. Fails with [`Error::NotApplicable`] when the graph
/// does not meet its hypotheses; numeric mismatches are reported, not raised.
pub fn verify(g: &MetrizedGraph, id: IdentityId, tol: f64) -> Result<IdentityReport> {
    let ctx = Context::new(g)?;
    verify_in(&ctx, id, tol)
}

pub fn verify_in(ctx: &Context, id: IdentityId, tol: f64) -> Result<IdentityReport> {
    let instances = catalog::evaluate(ctx, id)?;
    Ok(IdentityReport::from_instances(id, tol, instances))
}

/// Evaluate every identity; inapplicable ones come back as skipped.
pub fn verify_all(g: &MetrizedGraph, tol: f64) -> Result<Vec<IdentityReport>> {
    verify_many(g, IdentityId::ALL, tol)
}

pub fn verify_many(g: &MetrizedGraph, ids: &[IdentityId], tol: f64) -> Result<Vec<IdentityReport>> {
    let ctx = Context::new(g)?;
    ids.par_iter()
        .map(|&id| match verify_in(&ctx, id, tol) {
            Ok(r) => Ok(r),
            Err(Error::NotApplicable(reason)) => Ok(IdentityReport::skipped(id, tol, reason)),
            Err(e) => Err(e),
        })
        .collect()
}
