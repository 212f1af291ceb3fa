use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use taulab::connectivity::{banana_xy_slack, edge_connectivity, EdgeConnectivity};
use taulab::format::{parse_graph, write_graph};
use taulab::identities::{verify, verify_all, verify_many, IdentityId, Status};
use taulab::invariants::tau;
use taulab::random::{random_graph, GraphParams};
use taulab::transforms::{admissible_contractions, contract_edge, double_adjusted};
use taulab::Error;

fn corpus(seed: u64, n: usize, bridgeless: bool) -> Vec<taulab::MetrizedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = GraphParams { max_vertices: 6, max_edges: 12, bridgeless };
    (0..n).map(|_| random_graph(&mut rng, &p)).collect()
}

#[test]
fn parsed_file_verifies() {
    let g = parse_graph("# prism rungs\ngraph 4\nedge 0 1 0.5\nedge 1 2 2\nedge 2 3 1.25\nedge 3 0 3\nedge 0 2 0.7\n").unwrap();
    let reports = verify_all(&g, 1e-9).unwrap();
    assert_eq!(reports.len(), IdentityId::ALL.len());
    assert!(reports.iter().all(|r| r.passed()));
    assert!(reports.iter().filter(|r| r.is_skipped()).count() < 5);
}

#[test]
fn inapplicable_identity_is_an_error_from_verify() {
    let tree = parse_graph("graph 3\nedge 0 1 1\nedge 1 2 1\n").unwrap();
    assert!(matches!(verify(&tree, IdentityId::ContrX, 1e-9), Err(Error::NotApplicable(_))));
    let r = verify_many(&tree, &[IdentityId::ContrX], 1e-9).unwrap();
    assert_eq!(r[0].status, Status::Skipped);
    assert!(r[0].note.contains("bridgeless"));
}

#[test]
fn graphs_with_bridges_pass_their_applicable_identities() {
    for g in corpus(31, 60, false) {
        for r in verify_all(&g, 1e-9).unwrap() {
            assert!(r.passed(), "{r:?}\n{}", write_graph(&g));
        }
    }
}

#[test]
fn doubling_is_consistent_with_tau() {
    for g in corpus(32, 40, false) {
        let da = double_adjusted(&g).graph;
        assert_eq!(da.edge_count(), 2 * g.edge_count());
        assert!((da.total_length() - g.total_length()).abs() < 1e-12);
        let r = verify(&g, IdentityId::DaTau, 1e-9).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!((r.lhs.unwrap() - tau(&da).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn banana_ends_satisfy_the_xy_bracket() {
    for g in corpus(33, 80, true) {
        let lambda = edge_connectivity(&g).finite().unwrap();
        for seq in admissible_contractions(&g) {
            let end = seq.apply(&g).unwrap().graph;
            let slack = banana_xy_slack(&end, lambda, g.genus()).unwrap();
            assert!(slack >= -1e-9, "{slack} after {:?}\n{}", seq.ids, write_graph(&g));
        }
    }
}

#[test]
fn contraction_never_lowers_edge_connectivity() {
    for g in corpus(34, 80, true) {
        if g.vertex_count() < 3 {
            continue;
        }
        let lambda = edge_connectivity(&g);
        for i in g.edge_ids() {
            let after = edge_connectivity(&contract_edge(&g, i).unwrap().graph);
            assert!(after >= lambda, "{after} < {lambda}\n{}", write_graph(&g));
            assert_ne!(after, EdgeConnectivity::Finite(0));
        }
    }
}
