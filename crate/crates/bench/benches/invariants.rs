use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use taulab::connectivity::{edge_connectivity, n_of};
use taulab::graph::families::{complete, prism, wheel};
use taulab::identities::verify_all;
use taulab::invariants::{tau, tau_oracle_contraction, tau_oracle_integral, InvariantSet};
use taulab::random::{random_graph_where, GraphParams};
use taulab::transforms::cubic_transform;
use taulab::MetrizedGraph;

fn fuzzed(v: usize, e: usize) -> MetrizedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let p = GraphParams { max_vertices: v, max_edges: e, bridgeless: true };
    random_graph_where(&mut rng, &p, |g| g.vertex_count() == v && g.edge_count() == e)
}

fn bench_tau(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau");
    for n in [4, 8, 16, 32] {
        let g = complete(n, 1.0);
        group.bench_with_input(BenchmarkId::new("complete", n), &g, |b, g| b.iter(|| tau(black_box(g)).unwrap()));
    }
    let g = wheel(40, 1.0);
    group.bench_function("wheel-40", |b| b.iter(|| InvariantSet::compute(black_box(&g), 0).unwrap()));
    group.finish();
}

fn bench_oracles(c: &mut Criterion) {
    let g = fuzzed(6, 12);
    let mut group = c.benchmark_group("oracles");
    group.bench_function("contraction v6e12", |b| b.iter(|| tau_oracle_contraction(black_box(&g)).unwrap()));
    group.bench_function("integral v6e12 x64", |b| b.iter(|| tau_oracle_integral(black_box(&g), 64).unwrap()));
    group.finish();
}

fn bench_identities(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_all");
    group.sample_size(20);
    for (name, g) in [("prism", prism(1.0)), ("fuzzed v6e12", fuzzed(6, 12))] {
        group.bench_function(name, |b| b.iter(|| verify_all(black_box(&g), 1e-9).unwrap()));
    }
    group.finish();
}

fn bench_connectivity(c: &mut Criterion) {
    let g = fuzzed(6, 12);
    let mut group = c.benchmark_group("connectivity");
    group.bench_function("edge_connectivity v6e12", |b| b.iter(|| edge_connectivity(black_box(&g))));
    group.sample_size(20);
    group.bench_function("n_of v6e12", |b| b.iter(|| n_of(black_box(&g)).unwrap()));
    let k6 = complete(6, 1.0).normalize();
    group.bench_function("cubic_transform K6", |b| b.iter(|| cubic_transform(black_box(&k6), 1e-3).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_tau, bench_oracles, bench_identities, bench_connectivity);
criterion_main!(benches);
