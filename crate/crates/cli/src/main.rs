//! `taulab`: invariants, identity checks, fuzzing, surgeries and oracle
//! comparisons for metrized graphs stored as plain-text graph files.
//!
//! Exit codes: 0 all checks pass, 1 an identity or bound failed, 2 usage or
//! input error, 3 a graph with `τ/ℓ <= 1/108` was found.

mod fuzz;
mod report;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use taulab::connectivity::lower_bounds;
use taulab::format::{parse_graph, write_graph};
use taulab::identities::{verify_many, IdentityId, DEFAULT_TOLERANCE};
use taulab::invariants::{tau, tau_oracle_contraction, tau_oracle_integral, CONTRACTION_ORACLE_MAX_VERTICES};
use taulab::transforms::{
    contract_edge, cubic_transform, delete_edge, double_adjusted, identify_endpoints, identify_points,
    reduce_edge_connectivity_two,
};
use taulab::{EdgeId, InvariantSet, MetrizedGraph};

use report::{OracleReport, Outcome, RunReport};

const ORACLE_INTEGRAL_TOL: f64 = 1e-3;

#[derive(Parser)]
#[command(name = "taulab", version, about = "Tau constant and electrical invariants of metrized graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print all invariants, connectivity data and bound slacks.
    Invariants {
        file: PathBuf,
        #[arg(long, env = "TAULAB_TOL", default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Check identities from the registry.
    Verify {
        file: PathBuf,
        /// `all` or a comma-separated list such as `TAU_CONTRACT,CD_Z`.
        #[arg(long, default_value = "all")]
        ids: String,
        #[arg(long, env = "TAULAB_TOL", default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Run identities and bounds over seeded random graphs.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_v: usize,
        #[arg(long, default_value_t = 12)]
        max_e: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, env = "TAULAB_TOL", default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        /// Only generate bridgeless graphs.
        #[arg(long)]
        bridgeless: bool,
    },
    /// Apply a surgery and print the resulting graph file.
    Transform {
        file: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        edge: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
        /// Rescale the input to total length 1 first.
        #[arg(long)]
        normalize: bool,
    },
    /// Compare tau against the integral and contraction oracles.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        segments: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Contract,
    Delete,
    Identify,
    Da,
    Cubic,
    Reduce2,
}

/// Usage or input problems; always exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CliResult<T> = Result<T, UsageError>;

fn load(path: &Path) -> CliResult<MetrizedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn emit(report: &RunReport) -> CliResult<()> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(())
}

fn announce_violation(g: &MetrizedGraph, margin: f64, label: &str) {
    eprintln!("CONJECTURE VIOLATION ({label}): tau/ell - 1/108 = {margin}");
    eprint!("{}", write_graph(g));
}

fn cmd_invariants(file: &Path, tol: f64) -> CliResult<Outcome> {
    let g = load(file)?;
    let inv = InvariantSet::compute(&g, 0)?;
    let bounds = lower_bounds(&g)?;
    let mut outcome = Outcome::Pass;
    for c in bounds.checks().filter(|c| !c.holds(bounds.ell, tol)) {
        eprintln!("bound {} fails with slack {}", c.name, c.slack);
        outcome = outcome.worst(Outcome::Fail);
    }
    if bounds.conjecture_margin <= 0.0 {
        announce_violation(&g, bounds.conjecture_margin, &file.display().to_string());
        outcome = outcome.worst(Outcome::ConjectureViolation);
    }
    let mut report = RunReport::new("invariants");
    report.input = Some(file.display().to_string());
    report.tolerance = Some(tol);
    report.invariants = Some(inv);
    report.bounds = Some(bounds);
    report.outcome = outcome;
    emit(&report)?;
    Ok(outcome)
}

fn parse_ids(ids: &str) -> CliResult<Vec<IdentityId>> {
    if ids.trim().eq_ignore_ascii_case("all") {
        return Ok(IdentityId::ALL.to_vec());
    }
    ids.split(',').map(|s| s.trim().parse::<IdentityId>().map_err(UsageError::from)).collect()
}

fn cmd_verify(file: &Path, ids: &str, tol: f64) -> CliResult<Outcome> {
    let ids = parse_ids(ids)?;
    let g = load(file)?;
    let reports = verify_many(&g, &ids, tol)?;
    let mut outcome = Outcome::Pass;
    for r in &reports {
        if r.is_skipped() {
            eprintln!("{} skipped: {}", r.id, r.note);
        } else if !r.passed() {
            eprintln!("{} FAILED at {}: lhs {:?} rhs {:?}", r.id, r.note, r.lhs, r.rhs);
            outcome = Outcome::Fail;
        }
    }
    let mut report = RunReport::new("verify");
    report.input = Some(file.display().to_string());
    report.tolerance = Some(tol);
    report.identities = Some(reports);
    report.outcome = outcome;
    emit(&report)?;
    Ok(outcome)
}

fn cmd_fuzz(cfg: fuzz::FuzzConfig) -> CliResult<Outcome> {
    if cfg.max_vertices < 2 {
        return Err(UsageError("--max-v must be at least 2".into()));
    }
    if cfg.max_edges == 0 || cfg.max_edges > 64 {
        return Err(UsageError("--max-e must be between 1 and 64".into()));
    }
    let (summary, outcome) = fuzz::run(&cfg)?;
    for v in &summary.conjecture_violations {
        eprintln!("CONJECTURE VIOLATION in case {}: {}", v.case, v.detail);
        eprint!("{}", v.graph);
    }
    for f in &summary.failures {
        eprintln!("case {} failed {}: {}", f.case, f.check, f.detail);
    }
    let mut report = RunReport::new("fuzz");
    report.seed = Some(cfg.seed);
    report.tolerance = Some(cfg.tol);
    report.fuzz = Some(summary);
    report.outcome = outcome;
    emit(&report)?;
    Ok(outcome)
}

fn need(v: Option<usize>, flag: &str, op: &str) -> CliResult<usize> {
    v.ok_or_else(|| UsageError(format!("--op {op} needs --{flag}")))
}

fn cmd_transform(file: &Path, op: Op, edge: Option<usize>, p: Option<usize>, q: Option<usize>, epsilon: f64, normalize: bool) -> CliResult<Outcome> {
    let mut g = load(file)?;
    if normalize {
        g = g.normalize();
    }
    let mut notes = String::new();
    let out = match op {
        Op::Contract => contract_edge(&g, EdgeId(need(edge, "edge", "contract")?))?.graph,
        Op::Delete => delete_edge(&g, EdgeId(need(edge, "edge", "delete")?))?.graph,
        Op::Identify => match (edge, p, q) {
            (Some(i), None, None) => identify_endpoints(&g, EdgeId(i))?.graph,
            (None, Some(p), Some(q)) => identify_points(&g, p, q)?.graph,
            _ => return Err(UsageError("--op identify needs either --edge or both --p and --q".into())),
        },
        Op::Da => double_adjusted(&g).graph,
        Op::Cubic => {
            let t = cubic_transform(&g, epsilon)?;
            let bound = t.tau_input + epsilon;
            writeln!(notes, "# cubic transform, epsilon {epsilon}")?;
            writeln!(notes, "# tau before {} after {}", t.tau_input, t.tau_output)?;
            writeln!(notes, "# bound: tau after <= tau before + epsilon = {bound} ({})", if t.tau_output <= bound + DEFAULT_TOLERANCE { "holds" } else { "VIOLATED" })?;
            t.graph
        }
        Op::Reduce2 => {
            let r = reduce_edge_connectivity_two(&g)?;
            let (before, after) = (tau(&g)?, tau(&r.graph)?);
            let preserved = (before - after).abs() <= DEFAULT_TOLERANCE * before.abs().max(1.0);
            writeln!(notes, "# edge-connectivity-2 reduction in {} rounds, edge connectivity now {}", r.steps.len(), r.lambda)?;
            writeln!(notes, "# tau before {before} after {after} ({})", if preserved { "preserved" } else { "CHANGED" })?;
            r.graph
        }
    };
    print!("{notes}{}", write_graph(&out));
    Ok(Outcome::Pass)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn cmd_oracle(file: &Path, segments: usize) -> CliResult<Outcome> {
    let g = load(file)?;
    let t = tau(&g)?;
    let integral = tau_oracle_integral(&g, segments)?;
    let (contraction, note) = match tau_oracle_contraction(&g) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(format!("contraction oracle skipped: {e} (limit v <= {CONTRACTION_ORACLE_MAX_VERTICES})"))),
    };
    let oracle = OracleReport {
        segments,
        tau: t,
        tau_integral: integral,
        tau_contraction: contraction,
        contraction_note: note,
        deviation_integral: rel(t, integral),
        deviation_contraction: contraction.map(|c| rel(t, c)),
        deviation_integral_contraction: contraction.map(|c| rel(integral, c)),
        integral_tolerance: ORACLE_INTEGRAL_TOL,
        contraction_tolerance: DEFAULT_TOLERANCE,
    };
    let ok = oracle.deviation_integral <= ORACLE_INTEGRAL_TOL
        && oracle.deviation_contraction.map_or(true, |d| d <= DEFAULT_TOLERANCE);
    let outcome = if ok { Outcome::Pass } else { Outcome::Fail };
    let mut report = RunReport::new("oracle");
    report.input = Some(file.display().to_string());
    report.oracle = Some(oracle);
    report.outcome = outcome;
    emit(&report)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants { file, tol } => cmd_invariants(&file, tol),
        Command::Verify { file, ids, tol } => cmd_verify(&file, &ids, tol),
        Command::Fuzz { count, max_v, max_e, seed, tol, bridgeless } => cmd_fuzz(fuzz::FuzzConfig {
            count,
            max_vertices: max_v,
            max_edges: max_e,
            seed,
            tol,
            bridgeless_only: bridgeless,
        }),
        Command::Transform { file, op, edge, p, q, epsilon, normalize } => {
            cmd_transform(&file, op, edge, p, q, epsilon, normalize)
        }
        Command::Oracle { file, segments } => cmd_oracle(&file, segments),
    };
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
