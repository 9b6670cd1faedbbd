//! Property tests: serialization round-trips, lane-chunking invariance, and
//! containment of path reachability in walk reachability.

use proptest::prelude::*;

use restless::brute;
use restless::sieve::{evaluate_oracle, SieveConfig};
use restless::tgraph::{
    parse_edge_list, write_edge_list, RestingTimes, TemporalEdge, TemporalGraph,
};

fn arb_graph() -> impl Strategy<Value = TemporalGraph> {
    (2usize..12, 1u32..8).prop_flat_map(|(n, tau)| {
        proptest::collection::vec((0..n as u32, 0..n as u32, 1..=tau), 0..40).prop_map(
            move |triples| {
                let edges = triples
                    .into_iter()
                    .map(|(u, v, t)| TemporalEdge::new(u, v, t))
                    .collect();
                TemporalGraph::from_edges(n, tau, edges).unwrap()
            },
        )
    })
}

proptest! {
    #[test]
    fn write_parse_roundtrip(g in arb_graph()) {
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = parse_edge_list(buf.as_slice()).unwrap();
        prop_assert_eq!(back.graph, g);
        prop_assert_eq!(back.stats.self_loops_dropped, 0);
        prop_assert_eq!(back.stats.duplicates_dropped, 0);
    }

    // XOR-accumulating subset lanes in chunks of any width equals the
    // monolithic evaluation.
    #[test]
    fn lane_chunking_is_invisible(g in arb_graph(), k in 2usize..5, width in 1usize..20, seed in 0u64..1000) {
        let rest = RestingTimes::uniform(g.n(), (g.tau() / 2).max(1));
        let mut monolithic = SieveConfig::plain(k, seed);
        monolithic.lane_width = 1 << k;
        let mut chunked = SieveConfig::plain(k, seed);
        chunked.lane_width = width;
        prop_assert_eq!(
            evaluate_oracle(&g, &rest, &monolithic).unwrap(),
            evaluate_oracle(&g, &rest, &chunked).unwrap()
        );
    }

    // Restless-path reachability never exceeds restless-walk reachability.
    #[test]
    fn paths_within_walks(g in arb_graph(), seed in 0u64..500) {
        let rest = RestingTimes::uniform(g.n(), (g.tau() / 2).max(1));
        let s = (seed % g.n() as u64) as u32;
        let walk = g.walk_reachable(&rest, s);
        let params = restless::reach::OracleParams::new(seed);
        let rep = restless::reach::restless_reach(&g, &rest, s, &params, None).unwrap();
        for &v in &rep.reached() {
            prop_assert!(walk[v as usize]);
        }
        let exact = brute::brute_force_reach(&g, &rest, s, g.n());
        for v in exact.reached_vertices() {
            prop_assert!(walk[v as usize]);
        }
    }

    // Removing an edge never certifies a cell that the full graph did not:
    // certified cells are real paths, and subgraph paths are graph paths.
    #[test]
    fn certified_cells_shrink_with_the_graph(g in arb_graph(), k in 2usize..5, seed in 0u64..500) {
        prop_assume!(g.num_edges() > 0);
        let rest = RestingTimes::uniform(g.n(), (g.tau() / 2).max(1));
        let cfg = SieveConfig::plain(k, seed);
        let full = evaluate_oracle(&g, &rest, &cfg).unwrap();
        let drop_idx = (seed as usize) % g.num_edges();
        let dropped = g.edges()[drop_idx];
        let sub = g.filtered(|e| *e != dropped);
        let shrunk = evaluate_oracle(&sub, &rest, &cfg).unwrap();
        for (v, t) in shrunk.set_cells() {
            prop_assert!(full.get(v, t), "cell ({v},{t}) appeared after edge removal");
        }
    }
}

// On the fixture graph the inclusion is strict: a restless walk reaches the
// sink but no restless path does.
#[test]
fn walks_exceed_paths_on_fixture() {
    let g = parse_edge_list("5 5 5\n1 2 1\n2 3 2\n3 4 3\n4 2 4\n2 5 5\n".as_bytes())
        .unwrap()
        .graph;
    let rest = RestingTimes::uniform(5, 2);
    let walk = g.walk_reachable(&rest, 0);
    let path = brute::brute_force_reach(&g, &rest, 0, 5);
    assert!(walk[4]);
    assert!(!path.reached_vertices().contains(&4));
}
