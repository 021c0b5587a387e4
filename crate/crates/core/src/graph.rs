//! Temporal graph storage and the static operations every other module
//! builds on: ingestion, timestamp rewriting, window projection, k-core
//! peeling and connected components.

use std::collections::{BTreeMap, VecDeque};
use std::io::BufRead;

use crate::error::{Error, Result};

/// Dense vertex identifier in `0..n`.
pub type VertexId = u32;
/// Positive integer timestamp.
pub type Timestamp = u32;
/// Dense edge identifier; ids follow nondecreasing timestamp order.
pub type EdgeId = u32;

const SECONDS_PER_DAY: u32 = 86_400;

/// One timestamped interaction, stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TemporalEdge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub t: Timestamp,
}

impl TemporalEdge {
    /// The endpoint that is not `x`. `x` must be an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub neighbor: VertexId,
    pub t: Timestamp,
    pub edge: EdgeId,
}

/// Undirected temporal multigraph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalGraph {
    n: u32,
    edges: Vec<TemporalEdge>,
    adjacency: Vec<Vec<Incidence>>,
    labels: Vec<String>,
    timestamps: Vec<Timestamp>,
}

/// Warnings collected while reading an edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub self_loops_dropped: usize,
}

/// Old → new timestamp pairs produced by a rewrite, ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TimestampMap {
    pub pairs: Vec<(u64, Timestamp)>,
}

impl TimestampMap {
    pub fn get(&self, old: u64) -> Option<Timestamp> {
        self.pairs.binary_search_by_key(&old, |&(o, _)| o).ok().map(|i| self.pairs[i].1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum LabelKey<'a> {
    Numeric(u64),
    Text(&'a str),
}

fn label_key(s: &str) -> LabelKey<'_> {
    match s.parse::<u64>() {
        Ok(x) => LabelKey::Numeric(x),
        Err(_) => LabelKey::Text(s),
    }
}

impl TemporalGraph {
    /// Builds a graph over `labels.len()` vertices from `(u, v, t)` triples
    /// given in input order. Self-loops must already be filtered.
    fn assemble(labels: Vec<String>, mut raw: Vec<(VertexId, VertexId, Timestamp)>) -> Self {
        let n = labels.len() as u32;
        // stable: ties keep input order
        raw.sort_by_key(|&(_, _, t)| t);
        let edges: Vec<TemporalEdge> = raw
            .into_iter()
            .enumerate()
            .map(|(i, (a, b, t))| TemporalEdge {
                id: i as EdgeId,
                u: a.min(b),
                v: a.max(b),
                t,
            })
            .collect();
        let mut adjacency = vec![Vec::new(); n as usize];
        for e in &edges {
            adjacency[e.u as usize].push(Incidence {
                neighbor: e.v,
                t: e.t,
                edge: e.id,
            });
            adjacency[e.v as usize].push(Incidence {
                neighbor: e.u,
                t: e.t,
                edge: e.id,
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|inc| (inc.neighbor, inc.t, inc.edge));
        }
        let mut timestamps: Vec<Timestamp> = edges.iter().map(|e| e.t).collect();
        timestamps.dedup();
        TemporalGraph {
            n,
            edges,
            adjacency,
            labels,
            timestamps,
        }
    }

    /// Builds a graph on vertices `0..n` labelled by their decimal ids.
    /// Self-loops are dropped.
    pub fn from_edges(n: u32, triples: &[(VertexId, VertexId, Timestamp)]) -> Result<Self> {
        let mut raw = Vec::with_capacity(triples.len());
        for &(u, v, t) in triples {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u != v {
                raw.push((u, v, t));
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(Self::assemble(labels, raw))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Largest timestamp, 0 for an edgeless graph.
    pub fn t_max(&self) -> Timestamp {
        self.timestamps.last().copied().unwrap_or(0)
    }

    /// Edges sorted by `(t, id)`; `edges()[i].id == i`.
    pub fn edges(&self) -> &[TemporalEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&TemporalEdge> {
        self.edges.get(id as usize).ok_or(Error::UnknownEdge(id))
    }

    pub fn incidences(&self, u: VertexId) -> &[Incidence] {
        &self.adjacency[u as usize]
    }

    /// Distinct timestamps carried by at least one edge, ascending.
    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: VertexId) -> &str {
        &self.labels[u as usize]
    }

    pub fn vertex_by_label(&self, label: &str) -> Result<VertexId> {
        // labels are sorted by `label_key`, so a binary search is enough
        let key = label_key(label);
        self.labels
            .binary_search_by(|l| label_key(l).cmp(&key))
            .map(|i| i as VertexId)
            .map_err(|_| Error::UnknownLabel(label.to_string()))
    }

    pub fn window(&self, ts: Timestamp, te: Timestamp) -> Result<TimeWindow> {
        TimeWindow::new(ts, te, self.t_max())
    }

    /// Fails if any edge carries timestamp 0, which no window can contain.
    pub fn ensure_positive_timestamps(&self) -> Result<()> {
        match self.timestamps.first() {
            Some(0) => Err(Error::ZeroTimestamp),
            _ => Ok(()),
        }
    }

    fn with_timestamps(&self, f: impl Fn(Timestamp) -> Timestamp) -> TemporalGraph {
        let raw = self.edges.iter().map(|e| (e.u, e.v, f(e.t))).collect();
        Self::assemble(self.labels.clone(), raw)
    }

    /// Rank-compresses the distinct timestamps onto `1..=t_max`.
    pub fn normalize_timestamps(&self) -> (TemporalGraph, TimestampMap) {
        let pairs: Vec<(u64, Timestamp)> = self
            .timestamps
            .iter()
            .enumerate()
            .map(|(i, &t)| (u64::from(t), i as Timestamp + 1))
            .collect();
        let map = TimestampMap { pairs };
        let g = self.with_timestamps(|t| map.get(u64::from(t)).expect("timestamp present"));
        (g, map)
    }

    /// Buckets epoch-second timestamps into calendar days, then normalizes.
    /// The returned map sends each day number to its normalized timestamp.
    pub fn aggregate_days(&self) -> (TemporalGraph, TimestampMap) {
        let days = self.with_timestamps(|t| t / SECONDS_PER_DAY);
        days.normalize_timestamps()
    }

    /// Simple graph of all edges with `ts <= t <= te`.
    pub fn project(&self, w: TimeWindow) -> StaticGraph {
        let lo = self.edges.partition_point(|e| e.t < w.ts);
        let hi = self.edges.partition_point(|e| e.t <= w.te);
        StaticGraph::from_pairs(self.n, self.edges[lo..hi].iter().map(|e| (e.u, e.v)))
    }
}

/// Reads a whitespace separated `u v t` edge list. Lines starting with `#`
/// or `%` are comments. Vertex tokens may be any non-blank strings; they are
/// relabelled densely, numeric labels first in numeric order.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<(TemporalGraph, LoadReport)> {
    let mut report = LoadReport::default();
    let mut triples: Vec<(String, String, Timestamp)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        report.lines += 1;
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected 3 fields `u v t`, found {}", fields.len()),
            });
        }
        let t: i64 = fields[2].parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("timestamp {:?} is not an integer", fields[2]),
        })?;
        if t < 0 || t >= i64::from(u32::MAX) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("timestamp {t} outside 0..{}", u32::MAX),
            });
        }
        if fields[0] == fields[1] {
            report.self_loops_dropped += 1;
            continue;
        }
        triples.push((fields[0].to_string(), fields[1].to_string(), t as Timestamp));
    }
    if report.lines == 0 {
        return Err(Error::EmptyInput);
    }

    let mut names: Vec<&str> = triples.iter().flat_map(|(a, b, _)| [a.as_str(), b.as_str()]).collect();
    names.sort_by(|a, b| label_key(a).cmp(&label_key(b)));
    names.dedup_by(|a, b| label_key(a) == label_key(b));
    let index: BTreeMap<LabelKey<'_>, VertexId> = names.iter().enumerate().map(|(i, s)| (label_key(s), i as VertexId)).collect();
    let raw = triples
        .iter()
        .map(|(a, b, t)| (index[&label_key(a)], index[&label_key(b)], *t))
        .collect();
    let labels = names.iter().map(|s| s.to_string()).collect();
    Ok((TemporalGraph::assemble(labels, raw), report))
}

pub fn load_edge_list_str(text: &str) -> Result<(TemporalGraph, LoadReport)> {
    load_edge_list(text.as_bytes())
}

/// Closed time window `[ts, te]` with `1 <= ts <= te <= t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeWindow {
    pub ts: Timestamp,
    pub te: Timestamp,
}

impl TimeWindow {
    pub fn new(ts: Timestamp, te: Timestamp, t_max: Timestamp) -> Result<Self> {
        if ts == 0 || ts > te || te > t_max {
            return Err(Error::InvalidWindow { ts, te, t_max });
        }
        Ok(TimeWindow { ts, te })
    }
}

/// Simple undirected graph over the vertex universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    n: u32,
    vertices: Vec<VertexId>,
    adj: Vec<Vec<VertexId>>,
}

impl StaticGraph {
    /// Parallel pairs collapse; self-loops are ignored; vertices without a
    /// neighbor are not part of the vertex set.
    pub fn from_pairs(n: u32, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Self {
        let mut adj = vec![Vec::new(); n as usize];
        for (a, b) in pairs {
            if a != b {
                adj[a as usize].push(b);
                adj[b as usize].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let vertices = (0..n).filter(|&u| !adj[u as usize].is_empty()).collect();
        StaticGraph { n, vertices, adj }
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    /// Sorted vertex set.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, u: VertexId) -> bool {
        self.vertices.binary_search(&u).is_ok()
    }

    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adj[u as usize].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Sorted `(a, b)` pairs with `a < b`.
    pub fn edge_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for &a in &self.vertices {
            for &b in &self.adj[a as usize] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn induced(&self, keep: &[bool]) -> StaticGraph {
        let pairs = self.edge_pairs().into_iter().filter(|&(a, b)| keep[a as usize] && keep[b as usize]);
        StaticGraph::from_pairs(self.n, pairs)
    }
}

/// Maximal subgraph in which every vertex has at least `k` distinct
/// neighbors. The result does not depend on removal order.
pub fn peel_k_core(s: &StaticGraph, k: u32) -> StaticGraph {
    let k = k as usize;
    let n = s.n as usize;
    let mut degree: Vec<usize> = (0..n).map(|u| s.adj[u].len()).collect();
    let mut alive: Vec<bool> = degree.iter().map(|&d| d > 0).collect();
    let mut stack: Vec<VertexId> = s.vertices.iter().copied().filter(|&u| degree[u as usize] < k).collect();
    for &u in &stack {
        alive[u as usize] = false;
    }
    while let Some(u) = stack.pop() {
        for &w in &s.adj[u as usize] {
            let wi = w as usize;
            if alive[wi] {
                degree[wi] -= 1;
                if degree[wi] < k {
                    alive[wi] = false;
                    stack.push(w);
                }
            }
        }
    }
    s.induced(&alive)
}

/// Core number of every vertex of the universe (0 for absent vertices),
/// by the bucket peeling of Batagelj and Zaversnik.
pub fn core_numbers(s: &StaticGraph) -> Vec<u32> {
    let n = s.n as usize;
    let mut deg: Vec<usize> = (0..n).map(|u| s.adj[u].len()).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut order = vec![0usize; n];
    for u in 0..n {
        pos[u] = bin[deg[u]];
        order[pos[u]] = u;
        bin[deg[u]] += 1;
    }
    for d in (1..bin.len()).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;
    for i in 0..n {
        let u = order[i];
        for &w in &s.adj[u] {
            let w = w as usize;
            if deg[w] > deg[u] {
                let dw = deg[w];
                let pw = pos[w];
                let first = bin[dw];
                let x = order[first];
                if x != w {
                    order[pw] = x;
                    pos[x] = pw;
                    order[first] = w;
                    pos[w] = first;
                }
                bin[dw] += 1;
                deg[w] -= 1;
            }
        }
    }
    deg.into_iter().map(|d| d as u32).collect()
}

/// Connected components, each sorted, ordered by smallest member.
pub fn connected_components(s: &StaticGraph) -> Vec<Vec<VertexId>> {
    let mut seen = vec![false; s.n as usize];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for &root in &s.vertices {
        if seen[root as usize] {
            continue;
        }
        seen[root as usize] = true;
        queue.push_back(root);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &w in &s.adj[u as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest `k` whose k-core of the full window is nonempty.
pub fn measure_kmax(g: &TemporalGraph) -> u32 {
    if g.m() == 0 {
        return 0;
    }
    let full = StaticGraph::from_pairs(g.n(), g.edges().iter().map(|e| (e.u, e.v)));
    core_numbers(&full).into_iter().max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example_graph, v, EXAMPLE_EDGE_LIST};

    #[test]
    fn loads_example_graph() {
        let (g, report) = load_edge_list_str(EXAMPLE_EDGE_LIST).unwrap();
        assert_eq!((g.n(), g.m(), g.t_max()), (8, 11, 7));
        assert_eq!(report.self_loops_dropped, 0);
        assert_eq!(g.label(v(3)), "v3");
        assert_eq!(g.vertex_by_label("v8").unwrap(), v(8));
        // edge ids follow timestamp then input order
        assert_eq!(
            g.edges()[0],
            TemporalEdge {
                id: 0,
                u: v(3),
                v: v(8),
                t: 2
            }
        );
        assert_eq!(
            g.edges()[10],
            TemporalEdge {
                id: 10,
                u: v(5),
                v: v(6),
                t: 7
            }
        );
    }

    #[test]
    fn self_loop_only_input() {
        let (g, report) = load_edge_list_str("0 0 5\n").unwrap();
        assert_eq!(g.m(), 0);
        assert_eq!(report.self_loops_dropped, 1);
    }

    #[test]
    fn duplicates_are_kept_and_ordered_by_time() {
        let (g, _) = load_edge_list_str("0 1 10\n0 1 10\n1 2 3\n").unwrap();
        assert_eq!(g.m(), 3);
        let e: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.t)).collect();
        assert_eq!(e, vec![(1, 2, 3), (0, 1, 10), (0, 1, 10)]);
    }

    #[test]
    fn comments_numeric_order_and_errors() {
        let (g, _) = load_edge_list_str("# header\n% konect\n10 2 1\n2 9 1\n").unwrap();
        assert_eq!(g.labels(), &["2", "9", "10"]);
        assert!(matches!(load_edge_list_str("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list_str("# c\n1 2 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list_str("1 2 -4\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list_str("# only\n"), Err(Error::EmptyInput)));
    }

    #[test]
    fn normalization() {
        let g = TemporalGraph::from_edges(3, &[(0, 1, 100), (1, 2, 100), (0, 2, 500)]).unwrap();
        let (h, map) = g.normalize_timestamps();
        let ts: Vec<_> = h.edges().iter().map(|e| e.t).collect();
        assert_eq!(ts, vec![1, 1, 2]);
        assert_eq!(map.get(500), Some(2));

        let (p, map) = example_graph().normalize_timestamps();
        assert_eq!(p.t_max(), 6);
        assert_eq!(map.pairs, vec![(2, 1), (3, 2), (4, 3), (5, 4), (6, 5), (7, 6)]);
    }

    #[test]
    fn day_buckets() {
        let g = TemporalGraph::from_edges(4, &[(0, 1, 0), (1, 2, 86_399)]).unwrap();
        assert_eq!(g.aggregate_days().0.t_max(), 1);
        let g = TemporalGraph::from_edges(4, &[(0, 1, 86_399), (1, 2, 86_400)]).unwrap();
        let (h, _) = g.aggregate_days();
        let ts: Vec<_> = h.edges().iter().map(|e| e.t).collect();
        assert_eq!(ts, vec![1, 2]);

        let day = 86_400;
        let base = 12_523 * day;
        let times = [
            0,
            10,
            500,
            day,
            day + 7,
            day + 99,
            2 * day + 1,
            2 * day + 2,
            2 * day + 3,
            2 * day + 80_000,
        ];
        let triples: Vec<_> = times
            .iter()
            .enumerate()
            .map(|(i, &dt)| (i as u32 % 5, (i as u32 + 1) % 5, base + dt))
            .collect();
        let g = TemporalGraph::from_edges(5, &triples).unwrap();
        assert_eq!(g.aggregate_days().0.t_max(), 3);
    }

    #[test]
    fn projection_examples() {
        let g = example_graph();
        let s = g.project(g.window(4, 5).unwrap());
        assert_eq!(s.vertices(), &[v(1), v(2), v(3), v(6), v(7), v(8)]);
        assert_eq!(s.edge_count(), 6);

        let s = g.project(g.window(6, 6).unwrap());
        assert_eq!(s.edge_pairs(), vec![(v(2), v(4)), (v(2), v(5))]);

        let s = g.project(g.window(1, 7).unwrap());
        assert_eq!(s.edge_count(), 11);
        assert_eq!(s.vertices().len(), 8);
    }

    #[test]
    fn peeling_examples() {
        let g = example_graph();
        let core = peel_k_core(&g.project(g.window(4, 5).unwrap()), 2);
        assert_eq!(core.vertices(), &[v(1), v(2), v(3), v(6), v(7), v(8)]);
        assert_eq!(connected_components(&core), vec![vec![v(1), v(2), v(3)], vec![v(6), v(7), v(8)]]);

        assert!(peel_k_core(&g.project(g.window(5, 7).unwrap()), 2).is_empty());

        let core = peel_k_core(&g.project(g.window(3, 7).unwrap()), 2);
        assert_eq!(connected_components(&core), vec![(0..8).collect::<Vec<_>>()]);

        let s = g.project(g.window(6, 7).unwrap());
        assert_eq!(peel_k_core(&s, 1), s);
        assert!(connected_components(&StaticGraph::from_pairs(4, [])).is_empty());
    }

    #[test]
    fn parallel_edges_count_once() {
        // u has three parallel edges to one neighbor: degree 1, not 3
        let g = TemporalGraph::from_edges(3, &[(0, 1, 1), (0, 1, 2), (0, 1, 3), (1, 2, 1)]).unwrap();
        let s = g.project(g.window(1, 3).unwrap());
        assert_eq!(s.degree(0), 1);
        assert!(peel_k_core(&s, 2).is_empty());
    }

    #[test]
    fn kmax() {
        assert_eq!(measure_kmax(&example_graph()), 2);
        assert_eq!(measure_kmax(&TemporalGraph::from_edges(2, &[(0, 1, 9)]).unwrap()), 1);
        let mut clique = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                clique.push((a, b, 1 + a * 5 + b));
            }
        }
        assert_eq!(measure_kmax(&TemporalGraph::from_edges(5, &clique).unwrap()), 4);
    }

    #[test]
    fn window_validation() {
        let g = example_graph();
        assert!(g.window(0, 3).is_err());
        assert!(g.window(4, 3).is_err());
        assert!(g.window(1, 8).is_err());
        assert!(g.window(7, 7).is_ok());
    }
}
