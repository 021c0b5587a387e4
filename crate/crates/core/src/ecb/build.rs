//! Index construction by descending start time.
//!
//! Going from start time `ts + 1` to `ts` only lowers core times, which is
//! the same as inserting new parallel edge versions with lower ranks. Each
//! insertion finds where the new node hangs below the existing structure
//! ([`LiveForest::find_insertion`]), takes over the top nodes of both
//! endpoints' lower-ranked subtrees as children, then zips the two root-ward
//! chains above it into one ascending chain ([`LiveForest::merge`]). Where the
//! chains meet, the meeting node closes a cycle with the new node and is the
//! highest-ranked edge on it, so it leaves the spanning forest.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use super::{EntryPoint, ForestNode, Links, NodeId, PecbIndex, RankKey, VersionedEntry};
use crate::coretime::{all_edge_core_times, CoreTimeTable};
use crate::error::{Error, Result};
use crate::graph::{TemporalGraph, Timestamp, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

/// A child slot of a live node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Anchor {
    pub node: NodeId,
    pub side: Side,
}

/// Where a new node attaches. `left`/`right` become its children; `up_u` and
/// `up_v` are the first higher-ranked nodes above it on each endpoint's chain,
/// each with the slot the new node's subtree may occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub up_u: Option<Anchor>,
    pub up_v: Option<Anchor>,
    /// The endpoints are already joined below the new node's rank.
    pub convergent: bool,
}

/// Mutable `B_ts` during construction.
#[derive(Debug, Clone)]
pub struct LiveForest {
    ends: Vec<(VertexId, VertexId)>,
    parent: Vec<Option<NodeId>>,
    children: Vec<[Option<NodeId>; 2]>,
    live: Vec<bool>,
    incident: Vec<BTreeSet<NodeId>>,
    live_count: usize,
    dirty_nodes: Vec<NodeId>,
    node_flag: Vec<bool>,
    dirty_vertices: Vec<VertexId>,
    vertex_flag: Vec<bool>,
}

fn lower(a: Option<Anchor>, b: Option<Anchor>) -> Option<Anchor> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.node < x.node { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LiveForest {
    fn new(ends: Vec<(VertexId, VertexId)>, n: u32) -> Self {
        let count = ends.len();
        LiveForest {
            ends,
            parent: vec![None; count],
            children: vec![[None; 2]; count],
            live: vec![false; count],
            incident: vec![BTreeSet::new(); n as usize],
            live_count: 0,
            dirty_nodes: Vec::new(),
            node_flag: vec![false; count],
            dirty_vertices: Vec::new(),
            vertex_flag: vec![false; n as usize],
        }
    }

    pub fn is_live(&self, x: NodeId) -> bool {
        self.live[x as usize]
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn links(&self, x: NodeId) -> Links {
        let [left, right] = self.children[x as usize];
        Links {
            left,
            right,
            parent: self.parent[x as usize],
        }
    }

    pub fn lowest_incident(&self, u: VertexId) -> Option<NodeId> {
        self.incident[u as usize].first().copied()
    }

    pub fn live_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.live.len() as NodeId).filter(|&x| self.live[x as usize])
    }

    fn side_of(&self, node: NodeId, endpoint: VertexId) -> Side {
        if self.ends[node as usize].0 == endpoint {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn side_holding(&self, parent: NodeId, child: NodeId) -> Side {
        if self.children[parent as usize][0] == Some(child) {
            Side::Left
        } else {
            debug_assert_eq!(self.children[parent as usize][1], Some(child));
            Side::Right
        }
    }

    fn mark(&mut self, x: NodeId) {
        if !self.node_flag[x as usize] {
            self.node_flag[x as usize] = true;
            self.dirty_nodes.push(x);
        }
    }

    fn mark_vertex(&mut self, u: VertexId) {
        if !self.vertex_flag[u as usize] {
            self.vertex_flag[u as usize] = true;
            self.dirty_vertices.push(u);
        }
    }

    fn take_dirty(&mut self) -> (Vec<NodeId>, Vec<VertexId>) {
        let nodes = std::mem::take(&mut self.dirty_nodes);
        let vertices = std::mem::take(&mut self.dirty_vertices);
        for &x in &nodes {
            self.node_flag[x as usize] = false;
        }
        for &u in &vertices {
            self.vertex_flag[u as usize] = false;
        }
        (nodes, vertices)
    }

    /// Top of `endpoint`'s chain below `x`, and the nearest node above `x`
    /// on that chain.
    fn walk(&self, x: NodeId, endpoint: VertexId) -> (Option<NodeId>, Option<Anchor>) {
        let incident = &self.incident[endpoint as usize];
        let below = incident.range(..x).next_back().copied();
        let above = incident.range(x + 1..).next().copied();
        let top = below.map(|mut l| {
            while let Some(p) = self.parent[l as usize] {
                if p > x {
                    break;
                }
                l = p;
            }
            l
        });
        let via_chain = top.and_then(|l| {
            self.parent[l as usize].map(|p| Anchor {
                node: p,
                side: self.side_holding(p, l),
            })
        });
        let via_incident = above.map(|a| Anchor {
            node: a,
            side: self.side_of(a, endpoint),
        });
        let anchor = lower(via_chain, via_incident);
        // with a lower subtree present, its parent is always the first node above
        debug_assert!(top.is_none() || anchor == via_chain);
        (top, anchor)
    }

    pub fn find_insertion(&self, x: NodeId) -> Insertion {
        let (u, v) = self.ends[x as usize];
        let (left, up_u) = self.walk(x, u);
        let (right, up_v) = self.walk(x, v);
        Insertion {
            left,
            right,
            up_u,
            up_v,
            convergent: left.is_some() && left == right,
        }
    }

    fn detach(&mut self, x: NodeId) {
        if let Some(p) = self.parent[x as usize].take() {
            let side = self.side_holding(p, x);
            self.children[p as usize][side.index()] = None;
            self.mark(p);
        }
        self.mark(x);
    }

    fn attach(&mut self, x: NodeId, at: Anchor) -> Result<()> {
        if self.parent[x as usize] == Some(at.node) {
            return Ok(());
        }
        self.detach(x);
        let slot = &mut self.children[at.node as usize][at.side.index()];
        if let Some(occupant) = *slot {
            return Err(Error::Invariant(format!(
                "slot {:?} of node {} already holds {occupant} while attaching {x}",
                at.side, at.node
            )));
        }
        *slot = Some(x);
        self.parent[x as usize] = Some(at.node);
        self.mark(at.node);
        Ok(())
    }

    /// Adds `x` under the anchors found by [`find_insertion`](Self::find_insertion)
    /// and restores the forest. Returns the node expelled from the forest.
    pub fn insert_node(&mut self, x: NodeId, at: &Insertion) -> Result<Option<NodeId>> {
        if at.convergent {
            return Err(Error::Invariant(format!("node {x} closes a lower-ranked cycle")));
        }
        if self.live[x as usize] {
            return Err(Error::Invariant(format!("node {x} inserted twice")));
        }
        for child in at.left.into_iter().chain(at.right) {
            if !self.live[child as usize] {
                return Err(Error::Invariant(format!("anchor {child} is not live")));
            }
        }
        let (u, v) = self.ends[x as usize];
        self.live[x as usize] = true;
        self.live_count += 1;
        self.incident[u as usize].insert(x);
        self.incident[v as usize].insert(x);
        self.mark(x);
        self.mark_vertex(u);
        self.mark_vertex(v);
        for (side, child) in [(Side::Left, at.left), (Side::Right, at.right)] {
            if let Some(c) = child {
                self.attach(c, Anchor { node: x, side })?;
            }
        }
        self.merge(x, at.up_u, at.up_v)
    }

    /// Zips the chains above `e`. `eu` is `e`'s parent slot (or a free slot
    /// for a fresh node), `ev` a free slot on the other chain. Returns the
    /// node removed where the chains meet.
    pub fn merge(&mut self, e: NodeId, eu: Option<Anchor>, ev: Option<Anchor>) -> Result<Option<NodeId>> {
        let (mut e, mut eu, mut ev) = (e, eu, ev);
        let limit = self.live_count + 2;
        for _ in 0..limit {
            match (eu, ev) {
                (None, None) => {
                    self.detach(e);
                    return Ok(None);
                }
                (Some(a), Some(b)) if a.node == b.node => {
                    let lca = a.node;
                    self.detach(e);
                    let above = self.parent[lca as usize].map(|p| Anchor {
                        node: p,
                        side: self.side_holding(p, lca),
                    });
                    self.detach(lca);
                    if self.children[lca as usize] != [None, None] {
                        return Err(Error::Invariant(format!(
                            "expelled node {lca} still has children {:?}",
                            self.children[lca as usize]
                        )));
                    }
                    if let Some(at) = above {
                        self.attach(e, at)?;
                    }
                    self.retire(lca);
                    return Ok(Some(lca));
                }
                _ => {}
            }
            let take_v = match (eu, ev) {
                (None, _) => true,
                (Some(a), Some(b)) => b.node < a.node,
                (Some(_), None) => false,
            };
            let (target, other) = if take_v { (ev.unwrap(), eu) } else { (eu.unwrap(), ev) };
            self.attach(e, target)?;
            e = target.node;
            eu = self.parent[e as usize].map(|p| Anchor {
                node: p,
                side: self.side_holding(p, e),
            });
            ev = other;
        }
        Err(Error::Invariant(format!("merge above node {e} did not terminate")))
    }

    fn retire(&mut self, x: NodeId) {
        let (u, v) = self.ends[x as usize];
        self.live[x as usize] = false;
        self.live_count -= 1;
        self.incident[u as usize].remove(&x);
        self.incident[v as usize].remove(&x);
        self.mark(x);
        self.mark_vertex(u);
        self.mark_vertex(v);
    }
}

/// Counters gathered while building.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub sweeps: usize,
    pub versions: usize,
    pub inserted: usize,
    pub skipped: usize,
    pub retired: usize,
    pub entry_writes: usize,
    pub entry_point_writes: usize,
    pub core_time_elapsed: Duration,
    pub forest_elapsed: Duration,
}

/// Step-by-step construction, one start time per [`step`](Self::step).
pub struct Builder {
    k: u32,
    n: u32,
    m: u32,
    t_max: Timestamp,
    timestamps: Vec<Timestamp>,
    labels: Vec<String>,
    nodes: Vec<ForestNode>,
    /// Next higher-ranked version of the same edge.
    replaces: Vec<Option<NodeId>>,
    batches: Vec<(Timestamp, Vec<NodeId>)>,
    cursor: usize,
    forest: LiveForest,
    entries: Vec<Vec<VersionedEntry>>,
    entry_points: Vec<Vec<EntryPoint>>,
    report: BuildReport,
}

impl Builder {
    pub fn new(g: &TemporalGraph, table: &CoreTimeTable) -> Result<Self> {
        if table.edge_count() != g.m() {
            return Err(Error::Invariant(format!(
                "core-time table covers {} edges, graph has {}",
                table.edge_count(),
                g.m()
            )));
        }
        let t_max = g.t_max();
        let mut versions: Vec<(RankKey, Timestamp)> = Vec::new();
        for e in g.edges() {
            let list = table.entries(e.id)?;
            for (i, entry) in list.iter().enumerate() {
                if entry.core_time.is_finite() {
                    let created = list.get(i + 1).map_or(t_max, |next| next.start - 1);
                    versions.push((
                        RankKey {
                            core_time: entry.core_time,
                            edge: e.id,
                        },
                        created,
                    ));
                }
            }
        }
        versions.sort_unstable();
        let nodes: Vec<ForestNode> = versions
            .iter()
            .map(|&(rank, created)| {
                let e = g.edges()[rank.edge as usize];
                ForestNode {
                    edge: e.id,
                    u: e.u,
                    v: e.v,
                    core_time: rank.core_time,
                    created,
                    retired: None,
                }
            })
            .collect();

        let mut replaces = vec![None; nodes.len()];
        let mut latest: Vec<Option<NodeId>> = vec![None; g.m()];
        for id in (0..nodes.len() as NodeId).rev() {
            let edge = nodes[id as usize].edge as usize;
            replaces[id as usize] = latest[edge];
            latest[edge] = Some(id);
        }

        let mut order: Vec<NodeId> = (0..nodes.len() as NodeId).collect();
        order.sort_unstable_by_key(|&id| (std::cmp::Reverse(nodes[id as usize].created), id));
        let mut batches = Vec::with_capacity(g.timestamps().len());
        let mut pos = 0;
        for &ts in g.timestamps().iter().rev() {
            let start = pos;
            while pos < order.len() && nodes[order[pos] as usize].created == ts {
                pos += 1;
            }
            batches.push((ts, order[start..pos].to_vec()));
        }
        debug_assert_eq!(pos, order.len());

        let ends = nodes.iter().map(|x| (x.u, x.v)).collect();
        let count = nodes.len();
        Ok(Builder {
            k: table.k(),
            n: g.n(),
            m: g.m() as u32,
            t_max,
            timestamps: g.timestamps().to_vec(),
            labels: g.labels().to_vec(),
            report: BuildReport {
                sweeps: table.sweeps(),
                versions: count,
                ..BuildReport::default()
            },
            nodes,
            replaces,
            batches,
            cursor: 0,
            forest: LiveForest::new(ends, g.n()),
            entries: vec![Vec::new(); count],
            entry_points: vec![Vec::new(); g.n() as usize],
        })
    }

    /// Start time the next [`step`](Self::step) will produce.
    pub fn next_ts(&self) -> Option<Timestamp> {
        self.batches.get(self.cursor).map(|&(ts, _)| ts)
    }

    /// Versions inserted by the next step, ascending rank.
    pub fn pending(&self) -> &[NodeId] {
        self.batches.get(self.cursor).map_or(&[], |(_, b)| b.as_slice())
    }

    pub fn forest(&self) -> &LiveForest {
        &self.forest
    }

    pub fn forest_mut(&mut self) -> &mut LiveForest {
        &mut self.forest
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn report(&self) -> &BuildReport {
        &self.report
    }

    /// Applies one start time's batch and records the changed entries.
    pub fn step(&mut self) -> Result<Option<Timestamp>> {
        let Some((ts, batch)) = self.batches.get(self.cursor) else {
            return Ok(None);
        };
        let ts = *ts;
        for &x in batch {
            let at = self.forest.find_insertion(x);
            if at.convergent {
                self.nodes[x as usize].retired = Some(ts);
                self.report.skipped += 1;
            } else {
                if let Some(gone) = self.forest.insert_node(x, &at)? {
                    self.nodes[gone as usize].retired = Some(ts);
                    self.report.retired += 1;
                }
                self.report.inserted += 1;
            }
            if let Some(stale) = self.replaces[x as usize] {
                if self.forest.is_live(stale) {
                    return Err(Error::Invariant(format!(
                        "superseded version {stale} survived insertion of {x} at ts {ts}"
                    )));
                }
            }
        }
        self.cursor += 1;

        let (dirty_nodes, dirty_vertices) = self.forest.take_dirty();
        for x in dirty_nodes {
            if !self.forest.is_live(x) {
                continue;
            }
            let links = self.forest.links(x);
            let list = &mut self.entries[x as usize];
            if list.last().map(VersionedEntry::links) != Some(links) {
                list.push(VersionedEntry {
                    start: ts,
                    left: links.left,
                    right: links.right,
                    parent: links.parent,
                });
                self.report.entry_writes += 1;
            }
        }
        for u in dirty_vertices {
            let lowest = self.forest.lowest_incident(u);
            let list = &mut self.entry_points[u as usize];
            if list.last().and_then(|p| p.node) != lowest {
                list.push(EntryPoint { start: ts, node: lowest });
                self.report.entry_point_writes += 1;
            }
        }
        Ok(Some(ts))
    }

    pub fn finish(mut self) -> Result<(PecbIndex, BuildReport)> {
        let started = Instant::now();
        while self.step()?.is_some() {}
        self.report.forest_elapsed += started.elapsed();
        let (entry_offsets, entries) = flatten(self.entries)?;
        let (entry_point_offsets, entry_points) = flatten(self.entry_points)?;
        let index = PecbIndex::assemble(
            self.k,
            self.n,
            self.m,
            self.t_max,
            self.timestamps,
            self.nodes,
            entry_offsets,
            entries,
            entry_point_offsets,
            entry_points,
            self.labels,
        );
        Ok((index, self.report))
    }
}

fn flatten<T>(lists: Vec<Vec<T>>) -> Result<(Vec<u32>, Vec<T>)> {
    let total: usize = lists.iter().map(Vec::len).sum();
    if total > u32::MAX as usize {
        return Err(Error::Invariant(format!("{total} records exceed the u32 offset range")));
    }
    let mut offsets = Vec::with_capacity(lists.len() + 1);
    let mut flat = Vec::with_capacity(total);
    offsets.push(0);
    for list in lists {
        flat.extend(list);
        offsets.push(flat.len() as u32);
    }
    Ok((offsets, flat))
}

pub fn build_from_table(g: &TemporalGraph, table: &CoreTimeTable) -> Result<(PecbIndex, BuildReport)> {
    let started = Instant::now();
    let builder = Builder::new(g, table)?;
    let setup = started.elapsed();
    let (index, mut report) = builder.finish()?;
    report.forest_elapsed += setup;
    Ok((index, report))
}

/// Computes core times and builds the index for `k`.
pub fn build(g: &TemporalGraph, k: u32) -> Result<(PecbIndex, BuildReport)> {
    let started = Instant::now();
    let table = all_edge_core_times(g, k)?;
    let core_time_elapsed = started.elapsed();
    let (index, mut report) = build_from_table(g, &table)?;
    report.core_time_elapsed = core_time_elapsed;
    Ok((index, report))
}
