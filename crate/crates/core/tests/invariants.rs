mod common;

use common::{check_all, kruskal, random_graph, random_spec, GraphSpec};
use pecb::coretime::{all_edge_core_times, vertex_core_times_at, CoreTime};
use pecb::ctmsf::build_ctmsf_from_table;
use pecb::ecb::{build_from_table, Builder};
use pecb::fixtures::example_graph;
use pecb::oracle::{edge_core_time_oracle, temporal_k_core};

#[test]
fn example_index_is_sound() {
    let g = example_graph();
    for k in 1..=3 {
        let table = all_edge_core_times(&g, k).unwrap();
        let (idx, _) = build_from_table(&g, &table).unwrap();
        let bad = check_all(&g, k, &table, &idx, true);
        assert!(bad.is_empty(), "k={k}: {bad:?}");
    }
}

#[test]
fn random_indexes_are_sound() {
    for i in 0..16 {
        let spec = random_spec(i);
        let g = random_graph(spec);
        for k in [2, 3, 5] {
            let table = all_edge_core_times(&g, k).unwrap();
            let (idx, _) = build_from_table(&g, &table).unwrap();
            let bad = check_all(&g, k, &table, &idx, spec.n <= 30);
            assert!(bad.is_empty(), "{spec:?} k={k}: {:?}", &bad[..bad.len().min(5)]);
        }
    }
}

#[test]
fn baseline_forests_match_kruskal() {
    for i in 0..10 {
        let g = random_graph(random_spec(i));
        let table = all_edge_core_times(&g, 3).unwrap();
        let idx = build_ctmsf_from_table(&g, &table).unwrap();
        for ts in 1..=g.t_max() {
            let got: Vec<(u32, u32)> = idx.msf_edges_at(ts).into_iter().map(|(e, ct)| (e, ct.get().unwrap())).collect();
            assert_eq!(got, kruskal(&g, &table, ts), "ts {ts}");
            // the forest spans exactly the core of [ts, t_max]
            let core = temporal_k_core(&g, 3, g.window(ts, g.t_max()).unwrap());
            let comps = pecb::graph::connected_components(&core);
            assert_eq!(got.len(), core.vertices().len() - comps.len());
        }
    }
}

#[test]
fn core_times_match_the_scan_oracle() {
    for i in 0..12 {
        let spec = GraphSpec {
            seed: 77 + i,
            n: 12,
            m: 60 + 10 * i as usize,
            t_max: 12,
        };
        let g = random_graph(spec);
        for k in [1, 2, 3] {
            let table = all_edge_core_times(&g, k).unwrap();
            for e in g.edges() {
                let mut last = CoreTime::finite(0);
                for ts in 1..=g.t_max() {
                    let got = table.core_time_at(e.id, ts).unwrap();
                    assert_eq!(
                        got,
                        edge_core_time_oracle(&g, k, e.id, ts).unwrap(),
                        "{spec:?} k={k} e={} ts={ts}",
                        e.id
                    );
                    assert!(got >= last, "core time decreased in ts");
                    last = got;
                }
            }
        }
    }
}

#[test]
fn vertex_core_times_define_membership() {
    let g = random_graph(random_spec(3));
    for ts in 1..=g.t_max() {
        let ct = vertex_core_times_at(&g, 3, ts).unwrap();
        for te in ts..=g.t_max() {
            let core = temporal_k_core(&g, 3, g.window(ts, te).unwrap());
            for u in 0..g.n() {
                assert_eq!(core.contains(u), ct.ct[u as usize].within(te), "u={u} [{ts},{te}]");
            }
        }
    }
}

#[test]
fn steps_never_retire_more_than_they_insert() {
    for i in 0..8 {
        let g = random_graph(random_spec(i));
        let table = all_edge_core_times(&g, 2).unwrap();
        let mut builder = Builder::new(&g, &table).unwrap();
        while builder.next_ts().is_some() {
            let before = *builder.report();
            let live_before = builder.forest().live_count();
            builder.step().unwrap();
            let after = builder.report();
            let inserted = after.inserted - before.inserted;
            let retired = after.retired - before.retired;
            assert!(retired <= inserted);
            assert_eq!(builder.forest().live_count(), live_before + inserted - retired);
        }
    }
}
