//! Test-side oracles and structural checks. Nothing here calls into the
//! index construction code; union-find and Kruskal are written out again so
//! a bug in the library versions cannot hide itself.

#![allow(dead_code, clippy::type_complexity)]

pub mod golden;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use pecb::coretime::{CoreTime, CoreTimeTable};
use pecb::ecb::{ForestSnapshot, NodeId, PecbIndex};
use pecb::gen::uniform_edges;
use pecb::graph::{connected_components, EdgeId, TemporalGraph, TimeWindow, Timestamp, VertexId};
use pecb::oracle::temporal_k_core;

pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// False if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Minimum spanning forest at `ts` under core-time weights, ties by edge id.
/// Returns `(edge, core time)` sorted by edge id.
pub fn kruskal(g: &TemporalGraph, table: &CoreTimeTable, ts: Timestamp) -> Vec<(EdgeId, u32)> {
    let mut weighted: Vec<(u32, EdgeId)> = g
        .edges()
        .iter()
        .filter_map(|e| table.core_time_at(e.id, ts).unwrap().get().map(|ct| (ct, e.id)))
        .collect();
    weighted.sort_unstable();
    let mut dsu = Dsu::new(g.n() as usize);
    let mut out: Vec<(EdgeId, u32)> = weighted
        .into_iter()
        .filter(|&(_, id)| {
            let e = g.edge(id).unwrap();
            dsu.union(e.u as usize, e.v as usize)
        })
        .map(|(ct, id)| (id, ct))
        .collect();
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy)]
pub struct GraphSpec {
    pub seed: u64,
    pub n: u32,
    pub m: usize,
    pub t_max: u32,
}

/// Spread of sizes within the bounds n <= 50, m <= 600, t_max <= 60.
pub fn random_spec(i: u64) -> GraphSpec {
    let n = 8 + (i * 7 % 43) as u32;
    let m = 40 + (i * 131 % 561) as usize;
    let t_max = 4 + (i * 17 % 57) as u32;
    GraphSpec {
        seed: 1000 + i,
        n,
        m,
        t_max,
    }
}

pub fn random_graph(spec: GraphSpec) -> TemporalGraph {
    TemporalGraph::from_edges(spec.n, &uniform_edges(spec.n, spec.m, spec.t_max, spec.seed)).unwrap()
}

fn rank(idx: &PecbIndex, id: NodeId) -> (CoreTime, EdgeId) {
    let n = idx.node(id).unwrap();
    (n.core_time, n.edge)
}

/// Every structural property of one decoded forest. Returns descriptions of
/// the violations found.
pub fn check_snapshot(
    g: &TemporalGraph,
    k: u32,
    table: &CoreTimeTable,
    idx: &PecbIndex,
    snap: &ForestSnapshot,
    maximality: bool,
) -> Vec<String> {
    let ts = snap.ts;
    let mut bad = Vec::new();
    let ids = snap.node_ids();
    let live: BTreeSet<NodeId> = ids.iter().copied().collect();

    // binary shape and link symmetry
    for &(x, links) in &snap.links {
        for c in links.children() {
            match snap.get(c) {
                Some(cl) if cl.parent == Some(x) => {}
                _ => bad.push(format!("ts {ts}: child {c} of {x} does not point back")),
            }
            if rank(idx, c) >= rank(idx, x) || c >= x {
                bad.push(format!("ts {ts}: child {c} outranks parent {x}"));
            }
        }
        if links.left.is_some() && links.left == links.right {
            bad.push(format!("ts {ts}: node {x} has the same node in both slots"));
        }
        if let Some(p) = links.parent {
            match snap.get(p) {
                Some(pl) if pl.left == Some(x) || pl.right == Some(x) => {}
                _ => bad.push(format!("ts {ts}: parent {p} of {x} does not hold it")),
            }
        }
    }
    let mut reached = 0;
    let mut queue: VecDeque<NodeId> = snap.roots().into();
    let mut seen = BTreeSet::new();
    while let Some(x) = queue.pop_front() {
        if !seen.insert(x) {
            bad.push(format!("ts {ts}: node {x} reached twice"));
            continue;
        }
        reached += 1;
        if let Some(l) = snap.get(x) {
            queue.extend(l.children());
        }
    }
    if reached != snap.len() {
        bad.push(format!("ts {ts}: {} of {} nodes reachable from roots", reached, snap.len()));
    }

    // node set equals the Kruskal forest
    let mut decoded: Vec<(EdgeId, u32)> = ids
        .iter()
        .map(|&x| {
            let n = idx.node(x).unwrap();
            (n.edge, n.core_time.get().unwrap())
        })
        .collect();
    decoded.sort_unstable();
    if decoded != kruskal(g, table, ts) {
        bad.push(format!("ts {ts}: node set differs from Kruskal"));
    }

    // entry points are the lowest incident live nodes
    for u in 0..g.n() {
        let want = ids.iter().copied().find(|&x| {
            let n = idx.node(x).unwrap();
            n.u == u || n.v == u
        });
        if idx.entry_node_at(u, ts).unwrap() != want {
            bad.push(format!("ts {ts}: entry point of {u} is not {want:?}"));
        }
    }

    // slices: acyclic and spanning the core's components; each component's
    // slice nodes connected through forest links
    for te in ts..=g.t_max() {
        let slice: Vec<NodeId> = ids.iter().copied().filter(|&x| idx.node(x).unwrap().core_time.within(te)).collect();
        let mut dsu = Dsu::new(g.n() as usize);
        let mut touched = BTreeSet::new();
        for &x in &slice {
            let n = idx.node(x).unwrap();
            touched.insert(n.u);
            touched.insert(n.v);
            if !dsu.union(n.u as usize, n.v as usize) {
                bad.push(format!("[{ts},{te}]: slice has a cycle"));
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for &u in &touched {
            groups.entry(dsu.find(u as usize)).or_default().push(u);
        }
        let mut from_slice: Vec<Vec<VertexId>> = groups.into_values().collect();
        from_slice.sort();
        let core = temporal_k_core(g, k, TimeWindow { ts, te });
        let comps = connected_components(&core);
        if from_slice != comps {
            bad.push(format!("[{ts},{te}]: slice components differ from the core's"));
        }
        for comp in &comps {
            let members: BTreeSet<NodeId> = slice
                .iter()
                .copied()
                .filter(|&x| {
                    let n = idx.node(x).unwrap();
                    comp.binary_search(&n.u).is_ok() && comp.binary_search(&n.v).is_ok()
                })
                .collect();
            let Some(&first) = members.iter().next() else {
                bad.push(format!("[{ts},{te}]: component without slice nodes"));
                continue;
            };
            let mut seen = BTreeSet::from([first]);
            let mut queue = VecDeque::from([first]);
            while let Some(x) = queue.pop_front() {
                for y in snap.get(x).unwrap().neighbors() {
                    if members.contains(&y) && seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            if seen.len() != members.len() {
                bad.push(format!("[{ts},{te}]: component slice not connected in the forest"));
            }
        }
    }

    // left/right children are the top nodes reachable below the parent
    if maximality {
        for &(x, links) in &snap.links {
            let n = idx.node(x).unwrap();
            for (endpoint, child) in [(n.u, links.left), (n.v, links.right)] {
                let want = top_below(g, idx, &live, x, endpoint);
                if child != want {
                    bad.push(format!("ts {ts}: child of {x} at {endpoint} is {child:?}, want {want:?}"));
                }
            }
        }
    }

    // live count bound from the core of [ts, t_max]
    let core = temporal_k_core(g, k, TimeWindow { ts, te: g.t_max() });
    let bound = core.vertices().len() - connected_components(&core).len();
    if snap.len() > bound {
        bad.push(format!("ts {ts}: {} live nodes exceed {bound}", snap.len()));
    }
    bad
}

/// Highest-ranked live node reachable from `endpoint` over live nodes ranked
/// below `x`.
fn top_below(g: &TemporalGraph, idx: &PecbIndex, live: &BTreeSet<NodeId>, x: NodeId, endpoint: VertexId) -> Option<NodeId> {
    let lower: Vec<NodeId> = live.iter().copied().filter(|&y| rank(idx, y) < rank(idx, x)).collect();
    let mut reached = vec![false; g.n() as usize];
    reached[endpoint as usize] = true;
    let mut best = None;
    let mut changed = true;
    while changed {
        changed = false;
        for &y in &lower {
            let n = idx.node(y).unwrap();
            if reached[n.u as usize] || reached[n.v as usize] {
                if !(reached[n.u as usize] && reached[n.v as usize]) {
                    reached[n.u as usize] = true;
                    reached[n.v as usize] = true;
                    changed = true;
                }
                if best.is_none_or(|b| rank(idx, y) > rank(idx, b)) {
                    best = Some(y);
                }
            }
        }
    }
    best
}

/// Checks that hold over the whole index rather than one forest.
pub fn check_index_lists(idx: &PecbIndex) -> Vec<String> {
    let mut bad = Vec::new();
    for x in 0..idx.node_count() as NodeId {
        let list = idx.entries_of(x).unwrap();
        for w in list.windows(2) {
            if w[0].start <= w[1].start {
                bad.push(format!("node {x}: entry starts not decreasing"));
            }
            if w[0].links() == w[1].links() {
                bad.push(format!("node {x}: adjacent entries repeat"));
            }
        }
        let n = idx.node(x).unwrap();
        if !n.entered_forest() && !list.is_empty() {
            bad.push(format!("node {x}: never in a forest yet has entries"));
        }
        if n.entered_forest() && list.first().map(|e| e.start) != Some(n.created) {
            bad.push(format!("node {x}: first entry is not at its creation"));
        }
    }
    for u in 0..idx.n() {
        let list = idx.entry_points_of(u).unwrap();
        if list.windows(2).any(|w| w[0].start <= w[1].start || w[0].node == w[1].node) {
            bad.push(format!("vertex {u}: entry points not compressed"));
        }
    }
    bad
}

/// Runs every check on every start time.
pub fn check_all(g: &TemporalGraph, k: u32, table: &CoreTimeTable, idx: &PecbIndex, maximality: bool) -> Vec<String> {
    let mut bad = check_index_lists(idx);
    for ts in 1..=g.t_max() {
        bad.extend(check_snapshot(g, k, table, idx, &idx.snapshot_forest(ts), maximality));
    }
    bad
}
