//! The nine acceptance criteria. Runs without the libtest harness so every
//! criterion prints one PASS/FAIL line regardless of capture settings.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taulab::circuit::CircuitAnalysis;
use taulab::connectivity::{edge_connectivity, lower_bounds, n_of, vertex_connectivity, EdgeConnectivity};
use taulab::format::write_graph;
use taulab::graph::families::{banana, complete, cycle, prism};
use taulab::identities::verify_all;
use taulab::invariants::{tau, tau_at, tau_oracle_contraction, tau_oracle_integral, InvariantSet};
use taulab::random::{log_uniform_length, random_cycle, random_graph, random_graph_where, random_tree, GraphParams};
use taulab::transforms::{cubic_transform, reduce_edge_connectivity_two, subdivide};
use taulab::{Edge, MetrizedGraph};

const SEED: u64 = 0x7a75_1ab5;
const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn strict_rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn named_corpus() -> Vec<(&'static str, MetrizedGraph)> {
    vec![
        ("triangle", cycle(3, 1.0)),
        ("banana-2", banana(&[1.0; 2])),
        ("banana-3", banana(&[1.0; 3])),
        ("banana-4", banana(&[1.0; 4])),
        ("two-edge circle", cycle(2, 1.0)),
        ("K4", complete(4, 1.0)),
        ("3-prism", prism(1.0)),
    ]
}

/// 200 seeded random bridgeless multigraphs with v <= 6, e <= 12.
fn fuzz_corpus() -> Vec<MetrizedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let p = GraphParams { max_vertices: 6, max_edges: 12, bridgeless: true };
    (0..200).map(|_| random_graph(&mut rng, &p)).collect()
}

/// Fuzzed graphs that may have bridges.
fn mixed_corpus(seed: u64, n: usize) -> Vec<MetrizedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = GraphParams { max_vertices: 6, max_edges: 12, bridgeless: false };
    (0..n).map(|_| random_graph(&mut rng, &p)).collect()
}

fn with_total_length(g: MetrizedGraph, ell: f64) -> MetrizedGraph {
    let f = ell / g.total_length();
    g.scaled(f)
}

fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(2..9);
        let t = with_total_length(random_tree(&mut rng, n), log_uniform_length(&mut rng));
        let err = strict_rel(tau(&t).map_err(|e| e.to_string())?, t.total_length() / 4.0);
        ensure(err <= 1e-12, || format!("tree {} has relative error {err:e}", write_graph(&t)))?;
        worst = worst.max(err);
        let n = rng.random_range(1..9);
        let c = with_total_length(random_cycle(&mut rng, n), log_uniform_length(&mut rng));
        let err = strict_rel(tau(&c).map_err(|e| e.to_string())?, c.total_length() / 12.0);
        ensure(err <= 1e-12, || format!("cycle {} has relative error {err:e}", write_graph(&c)))?;
        worst = worst.max(err);
    }
    Ok(format!("20 trees and 20 cycles, worst relative error {worst:.1e}"))
}

fn worked_examples() -> Outcome {
    let check = |name: &str, got: f64, want: f64| {
        ensure((got - want).abs() <= 1e-12, || format!("{name}: got {got}, want {want}"))
    };
    let tri = InvariantSet::compute(&cycle(3, 1.0), 0).map_err(|e| e.to_string())?;
    check("triangle tau", tri.tau, 0.25)?;
    check("triangle x", tri.x, 1.0)?;
    check("triangle y", tri.y, 1.0)?;
    check("triangle z", tri.z, 1.0)?;
    check("triangle r", tri.r, 2.0)?;
    check("triangle w", tri.w.ok_or("triangle w missing")?, 1.0)?;
    let b3 = InvariantSet::compute(&banana(&[1.0; 3]), 0).map_err(|e| e.to_string())?;
    check("banana-3 tau", b3.tau, 7.0 / 36.0)?;
    check("banana-3 x", b3.x, 2.0 / 3.0)?;
    check("banana-3 y", b3.y, 1.0 / 3.0)?;
    check("banana-3 z", b3.z, 2.0)?;
    let nb3 = tau(&banana(&[1.0 / 3.0; 3])).map_err(|e| e.to_string())?;
    check("normalized banana-3 tau", nb3, 7.0 / 108.0)?;
    Ok("triangle, banana-3 and normalized banana-3 match to 1e-12".into())
}

fn identity_suite() -> Outcome {
    let mut graphs: Vec<(String, MetrizedGraph)> =
        named_corpus().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    graphs.extend(fuzz_corpus().into_iter().enumerate().map(|(i, g)| (format!("fuzz #{i}"), g)));
    let (mut checked, mut skipped) = (0usize, 0usize);
    let (mut worst_res, mut worst_slack) = (0.0f64, f64::INFINITY);
    for (name, g) in &graphs {
        for r in verify_all(g, TOL).map_err(|e| format!("{name}: {e}"))? {
            ensure(r.passed(), || format!("{name}: {} failed: {r:?}\n{}", r.id, write_graph(g)))?;
            if r.is_skipped() {
                skipped += 1;
                continue;
            }
            checked += 1;
            if let Some(res) = r.residual {
                worst_res = worst_res.max(res);
            }
            if let Some(s) = r.slack {
                worst_slack = worst_slack.min(s / r.lhs.unwrap().abs().max(r.rhs.unwrap().abs()).max(1.0));
            }
        }
    }
    Ok(format!(
        "{} graphs, {checked} identity checks, {skipped} skipped as inapplicable, worst residual {worst_res:.1e}, worst relative slack {worst_slack:.1e}",
        graphs.len()
    ))
}

fn cross_oracles() -> Outcome {
    let graphs = mixed_corpus(SEED ^ 4, 100);
    let (mut worst_contr, mut worst_int) = (0.0f64, 0.0f64);
    for g in &graphs {
        let t = tau(g).map_err(|e| e.to_string())?;
        let c = tau_oracle_contraction(g).map_err(|e| e.to_string())?;
        let d = rel(t, c);
        ensure(d <= 1e-9, || format!("contraction oracle off by {d:e} on\n{}", write_graph(g)))?;
        worst_contr = worst_contr.max(d);
        let i32 = tau_oracle_integral(g, 32).map_err(|e| e.to_string())?;
        let i64 = tau_oracle_integral(g, 64).map_err(|e| e.to_string())?;
        let d = rel(t, i64);
        ensure(d <= 1e-3, || format!("integral oracle off by {d:e} on\n{}", write_graph(g)))?;
        worst_int = worst_int.max(d);
        let (e32, e64) = ((t - i32).abs(), (t - i64).abs());
        ensure(e32 <= 1e-12 || e32 >= 3.0 * e64, || {
            format!("integral error went {e32:e} -> {e64:e} when doubling segments on\n{}", write_graph(g))
        })?;
    }
    Ok(format!(
        "100 graphs: contraction oracle within {worst_contr:.1e}, integral oracle within {worst_int:.1e}, error ratio >= 3 on doubling"
    ))
}

/// `g` and `h` glued by identifying vertex `p` of `g` with vertex 0 of `h`.
fn wedge(g: &MetrizedGraph, p: usize, h: &MetrizedGraph) -> MetrizedGraph {
    let off = g.vertex_count() - 1;
    let map = |w: usize| if w == 0 { p } else { w + off };
    let edges = g.edges().iter().copied().chain(h.edges().iter().map(|e| Edge::new(map(e.a), map(e.b), e.length)));
    MetrizedGraph::new(g.vertex_count() + h.vertex_count() - 1, edges.map(|e| (e.a, e.b, e.length))).unwrap()
}

fn invariances() -> Outcome {
    let graphs = mixed_corpus(SEED ^ 5, 100);
    let partners = mixed_corpus(SEED ^ 55, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 555);
    for (g, h) in graphs.iter().zip(&partners) {
        let t = tau(g).map_err(|e| e.to_string())?;
        let a = CircuitAnalysis::new(g).map_err(|e| e.to_string())?;
        let at0 = InvariantSet::from_analysis(&a, 0);
        for p in 0..g.vertex_count() {
            let s = InvariantSet::from_analysis(&a, p);
            let tp = tau_at(g, p).map_err(|e| e.to_string())?;
            ensure(rel(tp, t) <= TOL, || format!("tau at base {p} differs by {:e}", rel(tp, t)))?;
            ensure(rel(s.x - s.y, at0.x - at0.y) <= TOL, || format!("x - y moves with the base at {p}"))?;
        }
        let c = log_uniform_length(&mut rng);
        let ts = tau(&g.scaled(c)).map_err(|e| e.to_string())?;
        ensure(strict_rel(ts, c * t) <= 1e-12, || format!("scaling by {c} breaks linearity: {:e}", strict_rel(ts, c * t)))?;
        let sub = subdivide(g, 3).map_err(|e| e.to_string())?;
        let tsub = tau(&sub.graph).map_err(|e| e.to_string())?;
        ensure(rel(tsub, t) <= TOL, || format!("subdivision changes tau by {:e}", rel(tsub, t)))?;
        let p = rng.random_range(0..g.vertex_count());
        let th = tau(h).map_err(|e| e.to_string())?;
        let tw = tau(&wedge(g, p, h)).map_err(|e| e.to_string())?;
        ensure(rel(tw, t + th) <= TOL, || format!("one-point union is not additive: {:e}", rel(tw, t + th)))?;
    }
    Ok("base point, scale, subdivision and one-point-union additivity hold on 100 graphs".into())
}

fn connectivity() -> Outcome {
    let mut graphs: Vec<MetrizedGraph> = named_corpus().into_iter().map(|(_, g)| g).collect();
    graphs.extend(fuzz_corpus());
    graphs.extend(mixed_corpus(SEED ^ 6, 100));
    let mut exhaustive = 0;
    for g in &graphs {
        let lambda = edge_connectivity(g);
        let kappa = vertex_connectivity(g).map_err(|e| e.to_string())?;
        let delta = g.min_valence();
        let l = lambda.finite().ok_or("fuzzed graphs have two or more vertices")?;
        ensure(kappa <= l && l <= delta, || format!("kappa {kappa}, lambda {l}, delta {delta} on\n{}", write_graph(g)))?;
        if g.is_bridgeless() && g.vertex_count() <= 6 {
            let n = n_of(g).map_err(|e| e.to_string())?;
            ensure(EdgeConnectivity::Finite(n) == lambda, || format!("N = {n} but lambda = {l} on\n{}", write_graph(g)))?;
            exhaustive += 1;
        }
    }
    Ok(format!("N = lambda on {exhaustive} bridgeless graphs; kappa <= lambda <= delta on {}", graphs.len()))
}

fn bounds() -> Outcome {
    let mut graphs: Vec<MetrizedGraph> = named_corpus().into_iter().map(|(_, g)| g).collect();
    graphs.extend(fuzz_corpus());
    let mut worst = f64::INFINITY;
    for g in &graphs {
        let rep = lower_bounds(g).map_err(|e| e.to_string())?;
        for c in rep.bound_main.iter().chain(rep.bound_genus.iter()) {
            ensure(c.holds(rep.ell, TOL), || format!("{} slack {} on\n{}", c.name, c.slack, write_graph(g)))?;
            worst = worst.min(c.slack / rep.ell);
        }
    }
    let b6 = lower_bounds(&banana(&[1.0 / 6.0; 6])).map_err(|e| e.to_string())?;
    ensure((b6.tau - 7.0 / 108.0).abs() <= 1e-12, || format!("normalized banana-6 tau {}", b6.tau))?;
    let c = b6.bound_main.iter().find(|c| c.name == "main_lambda_ge_6").ok_or("banana-6 lacks the lambda >= 6 bound")?;
    ensure((c.slack - 1.0 / 18.0).abs() <= 1e-12, || format!("banana-6 slack {}", c.slack))?;
    let k4 = lower_bounds(&complete(4, 1.0 / 6.0)).map_err(|e| e.to_string())?;
    let lo = k4.bound_equal_length.iter().find(|c| c.name == "equal_length_lower").ok_or("K4 lacks lower bracket")?;
    let hi = k4.bound_equal_length.iter().find(|c| c.name == "equal_length_upper").ok_or("K4 lacks upper bracket")?;
    ensure((lo.bound - 5.0 / 96.0).abs() <= 1e-12 && (hi.bound - 1.0 / 18.0).abs() <= 1e-12, || {
        format!("K4 bracket [{}, {}]", lo.bound, hi.bound)
    })?;
    ensure(lo.bound <= k4.tau + 1e-12 && k4.tau <= hi.bound + 1e-12, || format!("K4 tau {} outside bracket", k4.tau))?;
    Ok(format!(
        "worst main/genus slack / ell = {worst:.3e} over {} graphs; banana-6 slack 1/18; K4 tau {:.6} in [5/96, 1/18]",
        graphs.len(),
        k4.tau
    ))
}

fn reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let p = GraphParams { max_vertices: 6, max_edges: 12, bridgeless: true };
    let eps = 1e-3;
    let mut worst_increase = f64::NEG_INFINITY;
    for _ in 0..20 {
        let g = random_graph_where(&mut rng, &p, |g| {
            g.vertex_count() >= 2 && g.cut_vertices().is_empty() && g.min_valence() >= 3 && g.valences().iter().any(|&d| d > 3)
        })
        .normalize();
        let out = cubic_transform(&g, eps).map_err(|e| format!("{e} on\n{}", write_graph(&g)))?;
        ensure(out.graph.valences().iter().all(|&d| d == 3), || format!("output not cubic for\n{}", write_graph(&g)))?;
        let t_out = tau(&out.graph).map_err(|e| e.to_string())?;
        let t_in = tau(&g).map_err(|e| e.to_string())?;
        ensure(t_out - t_in <= eps + TOL, || format!("tau rose by {} for\n{}", t_out - t_in, write_graph(&g)))?;
        worst_increase = worst_increase.max(t_out - t_in);
    }
    for _ in 0..20 {
        let g = random_graph_where(&mut rng, &p, |g| edge_connectivity(g) == EdgeConnectivity::Finite(2));
        let red = reduce_edge_connectivity_two(&g).map_err(|e| format!("{e} on\n{}", write_graph(&g)))?;
        let (t0, t1) = (tau(&g).map_err(|e| e.to_string())?, tau(&red.graph).map_err(|e| e.to_string())?);
        ensure(rel(t0, t1) <= TOL, || format!("reduction moved tau {t0} -> {t1} on\n{}", write_graph(&g)))?;
        ensure(rel(g.total_length(), red.graph.total_length()) <= TOL, || "reduction changed the total length".into())?;
        ensure(g.genus() == red.graph.genus(), || "reduction changed the genus".into())?;
        ensure(red.lambda != EdgeConnectivity::Finite(2), || "reduction left edge connectivity 2".into())?;
    }
    let c4 = reduce_edge_connectivity_two(&cycle(4, 1.0)).map_err(|e| e.to_string())?;
    let t_loop = tau(&c4.graph).map_err(|e| e.to_string())?;
    ensure(
        c4.graph.vertex_count() == 1 && c4.graph.edge_count() == 1 && (t_loop - 1.0 / 3.0).abs() <= 1e-12,
        || format!("C4 reduced to {}", write_graph(&c4.graph)),
    )?;
    Ok(format!(
        "20 cubic transforms (eps = {eps}, largest tau increase {worst_increase:.2e}), 20 reductions preserve tau/ell/genus, C4 -> loop with tau 1/3"
    ))
}

/// A margin below zero is a finding about the conjecture, reported loudly but
/// not counted as a test failure.
fn conjecture_scan() -> Outcome {
    let mut graphs: Vec<MetrizedGraph> = named_corpus().into_iter().map(|(_, g)| g).collect();
    graphs.extend(fuzz_corpus());
    graphs.extend(mixed_corpus(SEED ^ 4, 100));
    graphs.extend(mixed_corpus(SEED ^ 5, 100));
    let mut min = (f64::INFINITY, 0usize);
    for (i, g) in graphs.iter().enumerate() {
        let ratio = tau(g).map_err(|e| e.to_string())? / g.total_length();
        if ratio < min.0 {
            min = (ratio, i);
        }
    }
    let margin = min.0 - 1.0 / 108.0;
    if margin <= 0.0 {
        println!("FINDING criterion 9: tau/ell = {} <= 1/108 on\n{}", min.0, write_graph(&graphs[min.1]));
    }
    Ok(format!("min tau/ell = {:.6} over {} graphs (1/108 = {:.6}, margin {margin:.6})", min.0, graphs.len(), 1.0 / 108.0))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("closed forms for trees and circles", 1, closed_forms),
        ("worked examples", 1, worked_examples),
        ("identity suite", 60, identity_suite),
        ("cross-oracle tau agreement", 120, cross_oracles),
        ("invariances of tau", 30, invariances),
        ("connectivity", 60, connectivity),
        ("lower bounds", 10, bounds),
        ("reductions", 30, reductions),
        ("conjecture scan", 60, conjecture_scan),
    ];
    let mut failures = 0;
    for (n, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= Duration::from_secs(*limit) {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit} s ({detail})"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} [{elapsed:.2?} / {limit} s] {detail}", n + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {}: {name} [{elapsed:.2?} / {limit} s] {why}", n + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
