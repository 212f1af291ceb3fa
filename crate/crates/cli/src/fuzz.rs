use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use taulab::connectivity::lower_bounds;
use taulab::format::write_graph;
use taulab::identities::verify_all;
use taulab::random::{random_graph, GraphParams};
use taulab::{IdentityReport, MetrizedGraph, Result};

use crate::report::{CaseRef, FuzzFailure, FuzzSummary, Outcome};

pub struct FuzzConfig {
    pub count: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub seed: u64,
    pub tol: f64,
    pub bridgeless_only: bool,
}

struct Case {
    graph: MetrizedGraph,
    identities: Vec<IdentityReport>,
    bound_slack: Option<(String, f64)>,
    bound_failures: Vec<(String, f64)>,
    margin: f64,
}

/// Case `i` draws from its own ChaCha stream, so cases are independent of
/// evaluation order and of each other.
fn case_graph(cfg: &FuzzConfig, i: usize) -> MetrizedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(i as u64);
    let params = GraphParams { max_vertices: cfg.max_vertices, max_edges: cfg.max_edges, bridgeless: cfg.bridgeless_only };
    random_graph(&mut rng, &params)
}

fn run_case(cfg: &FuzzConfig, i: usize) -> Result<Case> {
    let graph = case_graph(cfg, i);
    let identities = verify_all(&graph, cfg.tol)?;
    let bounds = lower_bounds(&graph)?;
    let bound_slack = bounds
        .checks()
        .map(|c| (c.name.clone(), c.slack / bounds.ell))
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let bound_failures =
        bounds.checks().filter(|c| !c.holds(bounds.ell, cfg.tol)).map(|c| (c.name.clone(), c.slack)).collect();
    Ok(Case { graph, identities, bound_slack, bound_failures, margin: bounds.conjecture_margin })
}

fn keep_min(slot: &mut Option<CaseRef>, case: usize, value: f64, check: Option<String>) {
    if slot.as_ref().map_or(true, |r| value < r.value) {
        *slot = Some(CaseRef { case, value, check });
    }
}

fn keep_max(slot: &mut Option<CaseRef>, case: usize, value: f64, check: Option<String>) {
    if slot.as_ref().map_or(true, |r| value > r.value) {
        *slot = Some(CaseRef { case, value, check });
    }
}

pub fn run(cfg: &FuzzConfig) -> Result<(FuzzSummary, Outcome)> {
    let cases: Vec<Case> = (0..cfg.count).into_par_iter().map(|i| run_case(cfg, i)).collect::<Result<_>>()?;
    let mut s = FuzzSummary {
        count: cfg.count,
        max_vertices: cfg.max_vertices,
        max_edges: cfg.max_edges,
        bridgeless_only: cfg.bridgeless_only,
        identity_checks: 0,
        skipped: 0,
        worst_residual: None,
        worst_identity_slack: None,
        worst_bound_slack: None,
        min_conjecture_margin: None,
        failures: Vec::new(),
        conjecture_violations: Vec::new(),
    };
    for (i, c) in cases.iter().enumerate() {
        for r in &c.identities {
            if r.is_skipped() {
                s.skipped += 1;
                continue;
            }
            s.identity_checks += 1;
            let id = Some(r.id.to_string());
            if let Some(res) = r.residual {
                keep_max(&mut s.worst_residual, i, res, id.clone());
            }
            if let (Some(slack), Some(l), Some(rr)) = (r.slack, r.lhs, r.rhs) {
                keep_min(&mut s.worst_identity_slack, i, slack / l.abs().max(rr.abs()).max(1.0), id);
            }
            if !r.passed() {
                s.failures.push(FuzzFailure {
                    case: i,
                    check: r.id.to_string(),
                    detail: format!("lhs {:?} rhs {:?} residual {:?} slack {:?} at {}", r.lhs, r.rhs, r.residual, r.slack, r.note),
                    graph: write_graph(&c.graph),
                });
            }
        }
        if let Some((name, slack)) = &c.bound_slack {
            keep_min(&mut s.worst_bound_slack, i, *slack, Some(name.clone()));
        }
        for (name, slack) in &c.bound_failures {
            s.failures.push(FuzzFailure {
                case: i,
                check: name.clone(),
                detail: format!("bound slack {slack}"),
                graph: write_graph(&c.graph),
            });
        }
        keep_min(&mut s.min_conjecture_margin, i, c.margin, None);
        if c.margin <= 0.0 {
            s.conjecture_violations.push(FuzzFailure {
                case: i,
                check: "conjecture_margin".into(),
                detail: format!("tau/ell - 1/108 = {}", c.margin),
                graph: write_graph(&c.graph),
            });
        }
    }
    let mut outcome = Outcome::Pass;
    if !s.failures.is_empty() {
        outcome = outcome.worst(Outcome::Fail);
    }
    if !s.conjecture_violations.is_empty() {
        outcome = outcome.worst(Outcome::ConjectureViolation);
    }
    Ok((s, outcome))
}
