//! Vertex and edge core times.
//!
//! For a fixed start time `ts`, the core time of a vertex is the earliest end
//! time `te` at which it belongs to the k-core of the window `[ts, te]`. It is
//! found by a deletion sweep: take the k-core of `[ts, t_max]`, then delete the
//! edges of `t_max`, `t_max - 1`, ... one timestamp group at a time. A vertex
//! evicted while the window shrinks from `[ts, t]` to `[ts, t - 1]` has core
//! time `t`. Edge core times follow as `max(t(e), ct(u), ct(v))`.
//!
//! Only start times that carry an edge need a sweep: a start time inside a gap
//! sees the same windows as the next timestamp above it.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, TemporalGraph, Timestamp, VertexId};

/// A timestamp or the infinity sentinel, which orders above every timestamp.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoreTime(u32);

impl CoreTime {
    pub const INFINITY: CoreTime = CoreTime(u32::MAX);

    pub fn finite(t: Timestamp) -> CoreTime {
        debug_assert!(t != u32::MAX);
        CoreTime(t)
    }

    pub fn is_finite(self) -> bool {
        self != Self::INFINITY
    }

    pub fn get(self) -> Option<Timestamp> {
        self.is_finite().then_some(self.0)
    }

    /// `true` if the value is finite and at most `te`.
    pub fn within(self, te: Timestamp) -> bool {
        self.0 <= te && self.is_finite()
    }

    pub(crate) fn to_raw(self) -> u32 {
        self.0
    }

    pub(crate) fn from_raw(raw: u32) -> CoreTime {
        CoreTime(raw)
    }
}

impl fmt::Display for CoreTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(t) => write!(f, "{t}"),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for CoreTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Timestamp> for CoreTime {
    fn from(t: Timestamp) -> Self {
        CoreTime::finite(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCoreTimes {
    pub ts: Timestamp,
    pub ct: Vec<CoreTime>,
}

/// Collapsed `(u, v)` pairs of a multigraph, shared by all sweeps.
struct PairStructure<'g> {
    graph: &'g TemporalGraph,
    edge_pair: Vec<u32>,
    pair_adj: Vec<Vec<(VertexId, u32)>>,
    pair_count: usize,
}

impl<'g> PairStructure<'g> {
    fn new(graph: &'g TemporalGraph) -> Self {
        let mut order: Vec<EdgeId> = (0..graph.m() as EdgeId).collect();
        let edges = graph.edges();
        order.sort_unstable_by_key(|&e| (edges[e as usize].u, edges[e as usize].v));
        let mut edge_pair = vec![0u32; graph.m()];
        let mut pair_adj = vec![Vec::new(); graph.n() as usize];
        let mut pair_count = 0usize;
        let mut last = None;
        for e in order {
            let edge = &edges[e as usize];
            if last != Some((edge.u, edge.v)) {
                last = Some((edge.u, edge.v));
                pair_adj[edge.u as usize].push((edge.v, pair_count as u32));
                pair_adj[edge.v as usize].push((edge.u, pair_count as u32));
                pair_count += 1;
            }
            edge_pair[e as usize] = pair_count as u32 - 1;
        }
        PairStructure {
            graph,
            edge_pair,
            pair_adj,
            pair_count,
        }
    }
}

/// Scratch buffers for one deletion sweep; reusable across start times.
struct Sweep<'a, 'g> {
    pairs: &'a PairStructure<'g>,
    k: usize,
    multiplicity: Vec<u32>,
    degree: Vec<usize>,
    alive: Vec<bool>,
    stack: Vec<VertexId>,
    ct: Vec<CoreTime>,
}

impl<'a, 'g> Sweep<'a, 'g> {
    fn new(pairs: &'a PairStructure<'g>, k: u32) -> Self {
        let n = pairs.graph.n() as usize;
        Sweep {
            pairs,
            k: k as usize,
            multiplicity: vec![0; pairs.pair_count],
            degree: vec![0; n],
            alive: vec![false; n],
            stack: Vec::new(),
            ct: vec![CoreTime::INFINITY; n],
        }
    }

    fn evict(&mut self, u: VertexId) {
        if self.alive[u as usize] && self.degree[u as usize] < self.k {
            self.alive[u as usize] = false;
            self.stack.push(u);
        }
    }

    /// Drains the worklist, stamping every evicted vertex with `label`.
    fn repeel(&mut self, label: CoreTime) {
        while let Some(u) = self.stack.pop() {
            self.ct[u as usize] = label;
            for &(w, p) in &self.pairs.pair_adj[u as usize] {
                if self.multiplicity[p as usize] > 0 && self.alive[w as usize] {
                    self.degree[w as usize] -= 1;
                    if self.degree[w as usize] < self.k {
                        self.alive[w as usize] = false;
                        self.stack.push(w);
                    }
                }
            }
        }
    }

    fn run(&mut self, ts: Timestamp) -> &[CoreTime] {
        let graph = self.pairs.graph;
        let edges = graph.edges();
        let lo = edges.partition_point(|e| e.t < ts);
        self.multiplicity.fill(0);
        self.ct.fill(CoreTime::INFINITY);
        for e in &edges[lo..] {
            self.multiplicity[self.pairs.edge_pair[e.id as usize] as usize] += 1;
        }
        for u in 0..graph.n() as usize {
            let d = self.pairs.pair_adj[u]
                .iter()
                .filter(|&&(_, p)| self.multiplicity[p as usize] > 0)
                .count();
            self.degree[u] = d;
            self.alive[u] = d > 0;
        }
        for u in 0..graph.n() {
            self.evict(u);
        }
        // vertices outside the k-core of [ts, t_max] are never in a core
        self.repeel(CoreTime::INFINITY);

        let mut hi = edges.len();
        while hi > lo {
            let t = edges[hi - 1].t;
            let group_lo = edges[lo..hi].partition_point(|e| e.t < t) + lo;
            for e in &edges[group_lo..hi] {
                let p = self.pairs.edge_pair[e.id as usize] as usize;
                self.multiplicity[p] -= 1;
                if self.multiplicity[p] == 0 && self.alive[e.u as usize] && self.alive[e.v as usize] {
                    self.degree[e.u as usize] -= 1;
                    self.degree[e.v as usize] -= 1;
                    self.evict(e.u);
                    self.evict(e.v);
                    // drain now: a queued endpoint of a later deletion would
                    // otherwise never release its neighbor's degree
                    self.repeel(CoreTime::finite(t));
                }
            }
            hi = group_lo;
        }
        &self.ct
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::InvalidK)
    } else {
        Ok(())
    }
}

/// Core time of every vertex for start time `ts`.
pub fn vertex_core_times_at(g: &TemporalGraph, k: u32, ts: Timestamp) -> Result<VertexCoreTimes> {
    check_k(k)?;
    if ts == 0 || ts > g.t_max() {
        return Err(Error::InvalidWindow {
            ts,
            te: g.t_max(),
            t_max: g.t_max(),
        });
    }
    let pairs = PairStructure::new(g);
    let mut sweep = Sweep::new(&pairs, k);
    let ct = sweep.run(ts).to_vec();
    Ok(VertexCoreTimes { ts, ct })
}

/// One change point in an edge's core-time history.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreTimeEntry {
    pub start: Timestamp,
    pub core_time: CoreTime,
}

/// Per edge, the change-compressed sequence of `(startTime, coreTime)`
/// pairs: an entry holds for every start time from its own up to the next
/// entry's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreTimeTable {
    k: u32,
    t_max: Timestamp,
    lists: Vec<Vec<CoreTimeEntry>>,
    sweeps: usize,
}

impl CoreTimeTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t_max(&self) -> Timestamp {
        self.t_max
    }

    pub fn edge_count(&self) -> usize {
        self.lists.len()
    }

    /// Number of per-start-time deletion sweeps performed.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn entries(&self, edge: EdgeId) -> Result<&[CoreTimeEntry]> {
        self.lists.get(edge as usize).map(Vec::as_slice).ok_or(Error::UnknownEdge(edge))
    }

    /// Value of the entry with the largest start time `<= ts`; infinity when
    /// there is none.
    pub fn core_time_at(&self, edge: EdgeId, ts: Timestamp) -> Result<CoreTime> {
        let list = self.entries(edge)?;
        let idx = list.partition_point(|e| e.start <= ts);
        Ok(if idx == 0 { CoreTime::INFINITY } else { list[idx - 1].core_time })
    }

    pub fn total_entries(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    /// CSV dump: `edgeId,u,v,t,startTime,coreTime`, one row per entry.
    pub fn write_csv<W: std::io::Write>(&self, g: &TemporalGraph, mut out: W) -> std::io::Result<()> {
        writeln!(out, "edgeId,u,v,t,startTime,coreTime")?;
        for e in g.edges() {
            for entry in &self.lists[e.id as usize] {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    e.id,
                    g.label(e.u),
                    g.label(e.v),
                    e.t,
                    entry.start,
                    entry.core_time
                )?;
            }
        }
        Ok(())
    }
}

const SWEEP_CHUNK: usize = 64;

/// Edge core times for every start time of `g`.
pub fn all_edge_core_times(g: &TemporalGraph, k: u32) -> Result<CoreTimeTable> {
    check_k(k)?;
    g.ensure_positive_timestamps()?;
    let pairs = PairStructure::new(g);
    let edges = g.edges();
    let mut lists: Vec<Vec<CoreTimeEntry>> = vec![Vec::new(); g.m()];
    let present = g.timestamps();

    let mut previous: Timestamp = 0;
    for chunk in present.chunks(SWEEP_CHUNK) {
        // per start time, core times of the edges with t >= ts
        let rows: Vec<Vec<CoreTime>> = chunk
            .par_iter()
            .map_init(
                || Sweep::new(&pairs, k),
                |sweep, &ts| {
                    let lo = edges.partition_point(|e| e.t < ts);
                    let ct = sweep.run(ts);
                    edges[lo..]
                        .iter()
                        .map(|e| CoreTime::finite(e.t).max(ct[e.u as usize]).max(ct[e.v as usize]))
                        .collect()
                },
            )
            .collect();
        for (&ts, row) in chunk.iter().zip(rows) {
            let start = previous + 1;
            let lo = edges.len() - row.len();
            for (id, list) in lists.iter_mut().enumerate() {
                let value = if id < lo { CoreTime::INFINITY } else { row[id - lo] };
                if list.last().map(|e| e.core_time) != Some(value) {
                    list.push(CoreTimeEntry { start, core_time: value });
                }
            }
            previous = ts;
        }
    }

    Ok(CoreTimeTable {
        k,
        t_max: g.t_max(),
        lists,
        sweeps: present.len(),
    })
}
