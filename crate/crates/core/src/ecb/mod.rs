//! The versioned edge-centric binary forest index.
//!
//! For a start time `ts`, the forest `B_ts` has one node per edge of the
//! minimum spanning forest of the graph weighted by core times at `ts`. Nodes
//! are totally ordered by [`RankKey`]; a node's parent outranks it, its left
//! child is the highest-ranked node reachable from its `u` endpoint through
//! lower-ranked forest edges, its right child likewise from `v`.
//!
//! An edge whose core time changes across start times becomes several
//! parallel nodes, one per distinct finite core time. Node ids are assigned
//! in rank order, so comparing two ids compares their ranks.
//!
//! The forests of all start times are stored change-compressed: a node keeps
//! a list of `<startTime, left, right, parent>` entries in decreasing start
//! time, and the entry that applies at `ts` is the one with the smallest
//! start time `>= ts`. Vertices keep the same kind of list for their
//! lowest-ranked incident node, which seeds queries.

mod build;
mod format;

use std::collections::VecDeque;

pub use build::{build, build_from_table, Anchor, BuildReport, Builder, Insertion, LiveForest, Side};

use crate::coretime::CoreTime;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Timestamp, VertexId};

/// Forest node identifier; ids are dense and ordered by rank.
pub type NodeId = u32;

/// Total order on forest nodes: core time first, then edge id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankKey {
    pub core_time: CoreTime,
    pub edge: EdgeId,
}

/// One `(edge, core time)` version.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestNode {
    pub edge: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub core_time: CoreTime,
    /// Highest start time at which this version holds.
    pub created: Timestamp,
    /// Start time at which the node left the forest, if it did. Equal to
    /// `created` for versions that never entered it.
    pub retired: Option<Timestamp>,
}

impl ForestNode {
    pub fn rank(&self) -> RankKey {
        RankKey {
            core_time: self.core_time,
            edge: self.edge,
        }
    }

    /// Whether the node is part of `B_ts`.
    pub fn is_live_at(&self, ts: Timestamp) -> bool {
        ts <= self.created && self.retired.is_none_or(|r| ts > r)
    }

    /// Whether the node was ever part of a forest.
    pub fn entered_forest(&self) -> bool {
        self.retired != Some(self.created)
    }
}

pub fn rank_less(a: &ForestNode, b: &ForestNode) -> bool {
    a.rank() < b.rank()
}

/// Forest neighborhood of a node from `start` downward, until the next entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VersionedEntry {
    pub start: Timestamp,
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub parent: Option<NodeId>,
}

impl VersionedEntry {
    pub fn links(&self) -> Links {
        Links {
            left: self.left,
            right: self.right,
            parent: self.parent,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Links {
    pub left: Option<NodeId>,
    pub right: Option<NodeId>,
    pub parent: Option<NodeId>,
}

impl Links {
    pub fn children(&self) -> impl Iterator<Item = NodeId> {
        self.left.into_iter().chain(self.right)
    }

    pub fn neighbors(&self) -> impl Iterator<Item = NodeId> {
        self.parent.into_iter().chain(self.left).chain(self.right)
    }
}

/// Lowest-ranked incident node of a vertex from `start` downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntryPoint {
    pub start: Timestamp,
    pub node: Option<NodeId>,
}

/// Smallest-start-time-`>= ts` lookup over a list in decreasing start order.
fn versioned_lookup<T>(list: &[T], ts: Timestamp, start: impl Fn(&T) -> Timestamp) -> Option<&T> {
    let idx = list.partition_point(|e| start(e) >= ts);
    idx.checked_sub(1).map(|i| &list[i])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PecbIndex {
    k: u32,
    n: u32,
    m: u32,
    t_max: Timestamp,
    timestamps: Vec<Timestamp>,
    nodes: Vec<ForestNode>,
    entry_offsets: Vec<u32>,
    entries: Vec<VersionedEntry>,
    entry_point_offsets: Vec<u32>,
    entry_points: Vec<EntryPoint>,
    labels: Vec<String>,
    edge_version_offsets: Vec<u32>,
    edge_versions: Vec<NodeId>,
}

impl PecbIndex {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        k: u32,
        n: u32,
        m: u32,
        t_max: Timestamp,
        timestamps: Vec<Timestamp>,
        nodes: Vec<ForestNode>,
        entry_offsets: Vec<u32>,
        entries: Vec<VersionedEntry>,
        entry_point_offsets: Vec<u32>,
        entry_points: Vec<EntryPoint>,
        labels: Vec<String>,
    ) -> Self {
        let mut counts = vec![0u32; m as usize + 1];
        for node in &nodes {
            counts[node.edge as usize + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut edge_versions = vec![0; nodes.len()];
        for (id, node) in nodes.iter().enumerate() {
            let slot = &mut fill[node.edge as usize];
            edge_versions[*slot as usize] = id as NodeId;
            *slot += 1;
        }
        PecbIndex {
            k,
            n,
            m,
            t_max,
            timestamps,
            nodes,
            entry_offsets,
            entries,
            entry_point_offsets,
            entry_points,
            labels,
            edge_version_offsets: counts,
            edge_versions,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t_max(&self) -> Timestamp {
        self.t_max
    }

    /// Distinct edge timestamps of the indexed graph, ascending.
    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&ForestNode> {
        self.nodes.get(id as usize).ok_or(Error::UnknownNode(id))
    }

    /// Versions of one edge in ascending rank.
    pub fn versions_of(&self, edge: EdgeId) -> Result<&[NodeId]> {
        if edge >= self.m {
            return Err(Error::UnknownEdge(edge));
        }
        let lo = self.edge_version_offsets[edge as usize] as usize;
        let hi = self.edge_version_offsets[edge as usize + 1] as usize;
        Ok(&self.edge_versions[lo..hi])
    }

    /// Decreasing-start entry list of a node.
    pub fn entries_of(&self, id: NodeId) -> Result<&[VersionedEntry]> {
        self.node(id)?;
        let lo = self.entry_offsets[id as usize] as usize;
        let hi = self.entry_offsets[id as usize + 1] as usize;
        Ok(&self.entries[lo..hi])
    }

    pub fn entry_points_of(&self, u: VertexId) -> Result<&[EntryPoint]> {
        self.check_vertex(u)?;
        let lo = self.entry_point_offsets[u as usize] as usize;
        let hi = self.entry_point_offsets[u as usize + 1] as usize;
        Ok(&self.entry_points[lo..hi])
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }

    fn check_vertex(&self, u: VertexId) -> Result<()> {
        if u >= self.n {
            Err(Error::VertexOutOfRange { vertex: u, n: self.n })
        } else {
            Ok(())
        }
    }

    /// The entry of `id` that applies at `ts`; `None` if the node has no
    /// entry at or above `ts`.
    pub fn neighbors_at(&self, id: NodeId, ts: Timestamp) -> Result<Option<&VersionedEntry>> {
        Ok(versioned_lookup(self.entries_of(id)?, ts, |e| e.start))
    }

    /// Lowest-ranked node of `B_ts` incident to `u`.
    pub fn entry_node_at(&self, u: VertexId, ts: Timestamp) -> Result<Option<NodeId>> {
        Ok(versioned_lookup(self.entry_points_of(u)?, ts, |e| e.start).and_then(|e| e.node))
    }

    /// Decodes `B_ts` for every node alive at `ts`.
    pub fn snapshot_forest(&self, ts: Timestamp) -> ForestSnapshot {
        let mut links = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !node.is_live_at(ts) {
                continue;
            }
            let entry = self
                .neighbors_at(id as NodeId, ts)
                .expect("node id in range")
                .expect("live node has an entry");
            links.push((id as NodeId, entry.links()));
        }
        ForestSnapshot { ts, links }
    }

    pub fn stats(&self) -> IndexStats {
        let per_ts = self
            .timestamps
            .iter()
            .rev()
            .map(|&ts| {
                let mut inserted = 0;
                let mut retired = 0;
                let mut skipped = 0;
                for node in &self.nodes {
                    match (node.created == ts, node.retired == Some(ts)) {
                        (true, true) => skipped += 1,
                        (true, false) => inserted += 1,
                        (false, true) => retired += 1,
                        _ => {}
                    }
                }
                let snapshot = self.snapshot_forest(ts);
                TsStats {
                    ts,
                    inserted,
                    retired,
                    skipped,
                    live: snapshot.len(),
                    depth: snapshot.depth(),
                }
            })
            .collect();
        let node_count = self.nodes.len();
        IndexStats {
            node_count,
            nodes_with_entries: (0..node_count)
                .filter(|&i| self.entry_offsets[i] != self.entry_offsets[i + 1])
                .count(),
            total_entries: self.entries.len(),
            avg_entries_per_node: if node_count == 0 {
                0.0
            } else {
                self.entries.len() as f64 / node_count as f64
            },
            entry_point_records: self.entry_points.len(),
            serialized_bytes: self.serialized_len(),
            per_ts,
        }
    }
}

/// Decoded `B_ts`, nodes in ascending id (rank) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestSnapshot {
    pub ts: Timestamp,
    pub links: Vec<(NodeId, Links)>,
}

impl ForestSnapshot {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.links.iter().map(|&(id, _)| id).collect()
    }

    pub fn get(&self, id: NodeId) -> Option<&Links> {
        self.links.binary_search_by_key(&id, |&(i, _)| i).ok().map(|i| &self.links[i].1)
    }

    pub fn roots(&self) -> Vec<NodeId> {
        self.links.iter().filter(|(_, l)| l.parent.is_none()).map(|&(id, _)| id).collect()
    }

    /// Largest distance from a node to its root; 0 for an empty forest.
    pub fn depth(&self) -> usize {
        let mut depth = 0;
        let mut queue: VecDeque<(NodeId, usize)> = self.roots().into_iter().map(|r| (r, 0)).collect();
        while let Some((id, d)) = queue.pop_front() {
            depth = depth.max(d);
            if let Some(l) = self.get(id) {
                for c in l.children() {
                    queue.push_back((c, d + 1));
                }
            }
        }
        depth
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexStats {
    pub node_count: usize,
    pub nodes_with_entries: usize,
    pub total_entries: usize,
    /// Entries per node over all versions, including never-inserted ones.
    pub avg_entries_per_node: f64,
    pub entry_point_records: usize,
    pub serialized_bytes: usize,
    /// One row per edge timestamp, descending.
    pub per_ts: Vec<TsStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TsStats {
    pub ts: Timestamp,
    pub inserted: usize,
    pub retired: usize,
    pub skipped: usize,
    pub live: usize,
    pub depth: usize,
}
