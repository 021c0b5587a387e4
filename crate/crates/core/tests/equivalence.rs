mod common;

use common::{random_graph, random_spec, GraphSpec};
use pecb::coretime::all_edge_core_times;
use pecb::ctmsf::build_ctmsf_from_table;
use pecb::ecb::build_from_table;
use pecb::graph::TemporalGraph;
use pecb::oracle::{window_components, ComponentResult};
use pecb::query::{ComponentIndex, Query};
use pecb::verify::{verify, VerifyMode};

/// Every (vertex, window) pair against the oracle's component partition.
fn sweep(g: &TemporalGraph, k: u32) -> usize {
    let table = all_edge_core_times(g, k).unwrap();
    let (pecb, _) = build_from_table(g, &table).unwrap();
    let ctmsf = build_ctmsf_from_table(g, &table).unwrap();
    let mut nonempty = 0;
    for ts in 1..=g.t_max() {
        for te in ts..=g.t_max() {
            let (comps, of) = window_components(g, k, g.window(ts, te).unwrap());
            for u in 0..g.n() {
                let want = of[u as usize].map_or_else(ComponentResult::empty, |c| comps[c].clone());
                let q = Query::new(u, ts, te);
                assert_eq!(pecb.query(q).unwrap(), want, "pecb k={k} {q:?}");
                assert_eq!(ctmsf.query(q).unwrap(), want, "ctmsf k={k} {q:?}");
                nonempty += usize::from(!want.is_empty());
            }
        }
    }
    nonempty
}

#[test]
fn random_graphs_exhaustively() {
    for i in 0..10 {
        let spec = random_spec(i);
        let g = random_graph(spec);
        let hits: usize = [2, 3, 5].iter().map(|&k| sweep(&g, k)).sum();
        assert!(hits > 0, "{spec:?} never has a core");
    }
}

#[test]
fn dense_short_histories() {
    for seed in 0..6 {
        let g = random_graph(GraphSpec {
            seed,
            n: 10,
            m: 150,
            t_max: 5,
        });
        for k in 1..=6 {
            sweep(&g, k);
        }
    }
}

#[test]
fn sparse_long_histories() {
    for seed in 0..4 {
        let g = random_graph(GraphSpec {
            seed: 50 + seed,
            n: 30,
            m: 120,
            t_max: 60,
        });
        sweep(&g, 2);
    }
}

#[test]
fn library_harness_agrees() {
    let g = random_graph(random_spec(11));
    let table = all_edge_core_times(&g, 3).unwrap();
    let (pecb, _) = build_from_table(&g, &table).unwrap();
    let ctmsf = build_ctmsf_from_table(&g, &table).unwrap();
    let indexes: [(&str, &dyn ComponentIndex); 2] = [("pecb", &pecb), ("ctmsf", &ctmsf)];
    let report = verify(&g, 3, &indexes, VerifyMode::Sampled { samples: 2000, seed: 4 });
    assert!(report.passed());
    assert_eq!(report.checks, 4000);
}
