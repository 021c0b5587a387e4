#![allow(clippy::type_complexity)]

mod common;

use common::golden::{CORE_TIMES, FOREST};
use pecb::coretime::{all_edge_core_times, CoreTime};
use pecb::ctmsf::build_ctmsf;
use pecb::ecb::{build, Links, NodeId, PecbIndex};
use pecb::fixtures::{example_graph, v};
use pecb::graph::TemporalGraph;
use pecb::oracle::{tccs_oracle, window_components};
use pecb::query::{ComponentIndex, Query};

fn edge_id(g: &TemporalGraph, (a, b, t): (&str, &str, u32)) -> u32 {
    let (a, b) = (g.vertex_by_label(a).unwrap(), g.vertex_by_label(b).unwrap());
    g.edges()
        .iter()
        .find(|e| e.u == a.min(b) && e.v == a.max(b) && e.t == t)
        .unwrap()
        .id
}

fn golden_link(x: u32) -> Option<NodeId> {
    x.checked_sub(1)
}

#[test]
fn core_time_lists_match() {
    let g = example_graph();
    let table = all_edge_core_times(&g, 2).unwrap();
    for (a, b, t, want) in CORE_TIMES {
        let e = edge_id(&g, (a, b, t));
        let got: Vec<(u32, Option<u32>)> = table.entries(e).unwrap().iter().map(|x| (x.start, x.core_time.get())).collect();
        assert_eq!(got, want, "edge ({a},{b},{t})");
    }
}

#[test]
fn forest_nodes_match_link_for_link() {
    let g = example_graph();
    let (idx, report) = build(&g, 2).unwrap();
    assert_eq!(idx.node_count(), 12);
    assert_eq!(report.skipped, 3);
    for (i, row) in FOREST.iter().enumerate() {
        let node = idx.node(i as NodeId).unwrap();
        assert_eq!(node.edge, edge_id(&g, row.edge), "node e{}", i + 1);
        assert_eq!(node.core_time, CoreTime::finite(row.core_time));
        assert_eq!(node.created, row.created);
        let got: Vec<(u32, Option<NodeId>, Option<NodeId>, Option<NodeId>)> = idx
            .entries_of(i as NodeId)
            .unwrap()
            .iter()
            .map(|e| (e.start, e.left, e.right, e.parent))
            .collect();
        let want: Vec<_> = row
            .entries
            .iter()
            .map(|&(s, l, r, p)| (s, golden_link(l), golden_link(r), golden_link(p)))
            .collect();
        assert_eq!(got, want, "entries of e{}", i + 1);
    }
}

fn forest_ids(idx: &PecbIndex, ts: u32) -> Vec<u32> {
    idx.snapshot_forest(ts).node_ids().iter().map(|x| x + 1).collect()
}

#[test]
fn decoded_forests() {
    let (idx, _) = build(&example_graph(), 2).unwrap();
    assert!(forest_ids(&idx, 5).is_empty());
    assert_eq!(forest_ids(&idx, 4), [1, 2, 5, 6, 11, 12]);
    assert_eq!(forest_ids(&idx, 3), [1, 2, 5, 6, 8, 9, 12]);
    assert_eq!(idx.snapshot_forest(3).roots(), [11]);
    let b2 = idx.snapshot_forest(2);
    assert_eq!(forest_ids(&idx, 2), [1, 2, 4, 5, 6, 8, 9]);
    assert_eq!(b2.roots(), [8]);
    let links = |x: u32| *b2.get(x - 1).unwrap();
    let l = |x: u32| Some(x - 1);
    assert_eq!(
        links(9),
        Links {
            left: l(6),
            right: l(8),
            parent: None
        }
    );
    assert_eq!(
        links(6),
        Links {
            left: l(5),
            right: l(4),
            parent: l(9)
        }
    );
    assert_eq!(
        links(4),
        Links {
            left: l(2),
            right: None,
            parent: l(6)
        }
    );
    assert_eq!(
        links(2),
        Links {
            left: l(1),
            right: None,
            parent: l(4)
        }
    );
    assert_eq!(forest_ids(&idx, 1), forest_ids(&idx, 2));
}

#[test]
fn versioned_lookups() {
    let (idx, _) = build(&example_graph(), 2).unwrap();
    let e = |i: u32| i - 1;
    let at3 = idx.neighbors_at(e(6), 3).unwrap().unwrap();
    assert_eq!((at3.parent, at3.left, at3.right), (Some(e(12)), Some(e(5)), None));
    assert!(idx.neighbors_at(e(1), 5).unwrap().is_none());
    let at2 = idx.neighbors_at(e(9), 2).unwrap().unwrap();
    assert_eq!((at2.parent, at2.left, at2.right), (None, Some(e(6)), Some(e(8))));
    assert_eq!(idx.entry_node_at(v(2), 3).unwrap(), Some(e(1)));
    assert_eq!(idx.entry_node_at(v(8), 3).unwrap(), Some(e(6)));
    assert_eq!(idx.entry_node_at(v(4), 5).unwrap(), None);
    assert!(idx.neighbors_at(99, 1).is_err());
    assert!(idx.entry_node_at(8, 1).is_err());
}

#[test]
fn stats_census() {
    let (idx, report) = build(&example_graph(), 2).unwrap();
    let s = idx.stats();
    assert_eq!(s.node_count, 12);
    assert_eq!(s.nodes_with_entries, 9);
    assert_eq!(s.total_entries, 14);
    assert_eq!(s.total_entries, report.entry_writes);
    assert_eq!(s.entry_point_records, report.entry_point_writes);
    let ts3 = s.per_ts.iter().find(|t| t.ts == 3).unwrap();
    assert_eq!((ts3.inserted, ts3.skipped, ts3.retired, ts3.live), (2, 1, 1, 7));
    let ts2 = s.per_ts.iter().find(|t| t.ts == 2).unwrap();
    assert_eq!((ts2.inserted, ts2.retired, ts2.live, ts2.depth), (1, 1, 7, 4));
}

#[test]
fn every_query_agrees_with_the_oracle() {
    let g = example_graph();
    for k in 1..=3 {
        let (pecb, _) = build(&g, k).unwrap();
        let ctmsf = build_ctmsf(&g, k).unwrap();
        for ts in 1..=g.t_max() {
            for te in ts..=g.t_max() {
                for u in 0..g.n() {
                    let want = tccs_oracle(&g, k, u, g.window(ts, te).unwrap()).unwrap();
                    let q = Query::new(u, ts, te);
                    assert_eq!(pecb.query(q).unwrap(), want, "pecb k={k} {q:?}");
                    assert_eq!(ctmsf.query(q).unwrap(), want, "ctmsf k={k} {q:?}");
                }
            }
        }
    }
}

#[test]
fn published_answers() {
    let g = example_graph();
    let (idx, _) = build(&g, 2).unwrap();
    let r = idx.query(Query::new(v(2), 3, 5)).unwrap();
    assert_eq!(r.vertices, [v(1), v(2), v(3)]);
    let (comps, _) = window_components(&g, 2, g.window(4, 5).unwrap());
    let comps: Vec<_> = comps.into_iter().map(|c| c.vertices).collect();
    assert_eq!(comps, [vec![v(1), v(2), v(3)], vec![v(6), v(7), v(8)]]);
    assert_eq!(idx.query(Query::new(v(7), 4, 5)).unwrap().vertices, comps[1]);
}

#[test]
fn core_above_kmax_gives_empty_index() {
    let g = example_graph();
    let (idx, _) = build(&g, 3).unwrap();
    assert_eq!(idx.node_count(), 0);
    assert!(idx.query(Query::new(v(1), 1, 7)).unwrap().is_empty());
    let s = idx.stats();
    assert_eq!((s.total_entries, s.entry_point_records), (0, 0));
}
