//! Vertex-centric baseline: per start time, the core-time minimum spanning
//! forest stored as change-compressed incident edge lists per vertex. A
//! vertex rewrites its whole list whenever any incident forest edge changes.
//!
//! Each start time's forest comes from a fresh Kruskal run, so this index
//! shares no construction logic with the forest index and doubles as a
//! cross-check for it.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::time::Instant;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::binio::{check_offsets, check_timestamps, labels_len, put_labels, put_u32, put_u64, Reader};
use crate::coretime::{all_edge_core_times, CoreTime, CoreTimeTable};
use crate::ecb::RankKey;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, TemporalGraph, Timestamp, VertexId};
use crate::oracle::ComponentResult;
use crate::query::{ComponentIndex, Query, QueryStats};

const MAGIC: &[u8; 8] = b"CTMSFIDX";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 8 + 4 + 16 + 24;
const KRUSKAL_CHUNK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MsfEdge {
    pub edge: EdgeId,
    pub other: VertexId,
    pub core_time: CoreTime,
}

/// A vertex's incident list from `start` downward: `pool[lo..hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct VertexVersion {
    start: Timestamp,
    lo: u32,
    hi: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtmsfIndex {
    k: u32,
    n: u32,
    m: u32,
    t_max: Timestamp,
    timestamps: Vec<Timestamp>,
    labels: Vec<String>,
    offsets: Vec<u32>,
    versions: Vec<VertexVersion>,
    pool: Vec<MsfEdge>,
}

/// Kruskal over the edges with finite core time at `ts`, ascending rank.
/// Returns the chosen edges in rank order.
pub fn msf_at(g: &TemporalGraph, table: &CoreTimeTable, ts: Timestamp) -> Result<Vec<(EdgeId, CoreTime)>> {
    let mut candidates = Vec::new();
    for e in g.edges() {
        if e.t < ts {
            continue;
        }
        let ct = table.core_time_at(e.id, ts)?;
        if ct.is_finite() {
            candidates.push(RankKey { core_time: ct, edge: e.id });
        }
    }
    candidates.sort_unstable();
    let mut uf = UnionFind::<u32>::new(g.n() as usize);
    let mut chosen = Vec::new();
    for key in candidates {
        let e = g.edges()[key.edge as usize];
        if uf.union(e.u, e.v) {
            chosen.push((key.edge, key.core_time));
        }
    }
    Ok(chosen)
}

pub fn build_ctmsf_from_table(g: &TemporalGraph, table: &CoreTimeTable) -> Result<CtmsfIndex> {
    let n = g.n() as usize;
    let mut current: Vec<Vec<MsfEdge>> = vec![Vec::new(); n];
    let mut lists: Vec<Vec<VertexVersion>> = vec![Vec::new(); n];
    let mut pool = Vec::new();
    let descending: Vec<Timestamp> = g.timestamps().iter().rev().copied().collect();
    for chunk in descending.chunks(KRUSKAL_CHUNK) {
        let forests: Vec<Vec<(EdgeId, CoreTime)>> = chunk.par_iter().map(|&ts| msf_at(g, table, ts)).collect::<Result<_>>()?;
        for (&ts, forest) in chunk.iter().zip(forests) {
            let mut next: Vec<Vec<MsfEdge>> = vec![Vec::new(); n];
            for (edge, core_time) in forest {
                let e = g.edges()[edge as usize];
                next[e.u as usize].push(MsfEdge {
                    edge,
                    other: e.v,
                    core_time,
                });
                next[e.v as usize].push(MsfEdge {
                    edge,
                    other: e.u,
                    core_time,
                });
            }
            for (u, mut list) in next.into_iter().enumerate() {
                list.sort_unstable_by_key(|x| x.edge);
                if list != current[u] {
                    let lo = pool.len();
                    pool.extend_from_slice(&list);
                    if pool.len() > u32::MAX as usize {
                        return Err(Error::Invariant("baseline edge pool exceeds u32 range".into()));
                    }
                    lists[u].push(VertexVersion {
                        start: ts,
                        lo: lo as u32,
                        hi: pool.len() as u32,
                    });
                    current[u] = list;
                }
            }
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut versions = Vec::new();
    offsets.push(0);
    for list in lists {
        versions.extend(list);
        offsets.push(versions.len() as u32);
    }
    Ok(CtmsfIndex {
        k: table.k(),
        n: g.n(),
        m: g.m() as u32,
        t_max: g.t_max(),
        timestamps: g.timestamps().to_vec(),
        labels: g.labels().to_vec(),
        offsets,
        versions,
        pool,
    })
}

pub fn build_ctmsf(g: &TemporalGraph, k: u32) -> Result<CtmsfIndex> {
    let table = all_edge_core_times(g, k)?;
    build_ctmsf_from_table(g, &table)
}

pub fn ctmsf_query(idx: &CtmsfIndex, q: Query) -> Result<ComponentResult> {
    idx.query(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtmsfStats {
    pub version_records: usize,
    pub pooled_edges: usize,
    pub serialized_bytes: usize,
}

impl CtmsfIndex {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    /// Forest edges incident to `u` at `ts`, ascending edge id.
    pub fn incident_at(&self, u: VertexId, ts: Timestamp) -> Result<&[MsfEdge]> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange { vertex: u, n: self.n });
        }
        let list = &self.versions[self.offsets[u as usize] as usize..self.offsets[u as usize + 1] as usize];
        let idx = list.partition_point(|v| v.start >= ts);
        Ok(match idx.checked_sub(1) {
            Some(i) => &self.pool[list[i].lo as usize..list[i].hi as usize],
            None => &[],
        })
    }

    /// Decoded forest edges at `ts`, ascending edge id.
    pub fn msf_edges_at(&self, ts: Timestamp) -> Vec<(EdgeId, CoreTime)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for x in self.incident_at(u, ts).expect("vertex in range") {
                if u < x.other {
                    out.push((x.edge, x.core_time));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn stats(&self) -> CtmsfStats {
        CtmsfStats {
            version_records: self.versions.len(),
            pooled_edges: self.pool.len(),
            serialized_bytes: self.serialized_len(),
        }
    }

    pub fn serialized_len(&self) -> usize {
        HEADER_LEN
            + 4 * self.timestamps.len()
            + 4 * (self.n as usize + 1)
            + 12 * self.versions.len()
            + 12 * self.pool.len()
            + labels_len(&self.labels)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&[VERSION, 0, 0, 0]);
        for x in [self.k, self.n, self.m, self.t_max] {
            put_u32(&mut out, x);
        }
        for c in [self.timestamps.len(), self.versions.len(), self.pool.len()] {
            put_u64(&mut out, c as u64);
        }
        for &t in &self.timestamps {
            put_u32(&mut out, t);
        }
        for &o in &self.offsets {
            put_u32(&mut out, o);
        }
        for v in &self.versions {
            for f in [v.start, v.lo, v.hi] {
                put_u32(&mut out, f);
            }
        }
        for x in &self.pool {
            for f in [x.edge, x.other, x.core_time.to_raw()] {
                put_u32(&mut out, f);
            }
        }
        put_labels(&mut out, &self.labels);
        debug_assert_eq!(out.len(), self.serialized_len());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(8, "magic")? != MAGIC {
            return Err(Error::Format("not a CTMSF index file".into()));
        }
        let version = r.take(4, "version")?;
        if version[0] != VERSION {
            return Err(Error::Format(format!("unsupported version {}", version[0])));
        }
        if version[1..] != [0, 0, 0] {
            return Err(Error::Format("reserved header bytes are set".into()));
        }
        let k = r.u32("k")?;
        let n = r.u32("n")?;
        let m = r.u32("m")?;
        let t_max = r.u32("t_max")?;
        let ts_count = r.count("timestamp", 4)?;
        let version_count = r.count("version", 12)?;
        let pool_count = r.count("pool", 12)?;
        if k == 0 {
            return Err(Error::Format("k is zero".into()));
        }
        let timestamps = r.u32s(ts_count, "timestamps")?;
        check_timestamps(&timestamps, t_max)?;
        let offsets = r.u32s(n as usize + 1, "vertex offsets")?;
        check_offsets(&offsets, version_count, "vertex")?;
        let versions: Vec<VertexVersion> = r
            .u32s(version_count * 3, "versions")?
            .chunks_exact(3)
            .map(|f| VertexVersion {
                start: f[0],
                lo: f[1],
                hi: f[2],
            })
            .collect();
        if versions.iter().any(|v| v.lo > v.hi || v.hi as usize > pool_count) {
            return Err(Error::Format("version points outside the edge pool".into()));
        }
        for w in offsets.windows(2) {
            let list = &versions[w[0] as usize..w[1] as usize];
            if list.windows(2).any(|p| p[0].start <= p[1].start) {
                return Err(Error::Format("version starts not decreasing".into()));
            }
        }
        let pool: Vec<MsfEdge> = r
            .u32s(pool_count * 3, "edge pool")?
            .chunks_exact(3)
            .map(|f| MsfEdge {
                edge: f[0],
                other: f[1],
                core_time: CoreTime::from_raw(f[2]),
            })
            .collect();
        if pool.iter().any(|x| x.edge >= m || x.other >= n || !x.core_time.is_finite()) {
            return Err(Error::Format("edge pool entry out of range".into()));
        }
        let labels = r.labels(n)?;
        r.finish()?;
        Ok(CtmsfIndex {
            k,
            n,
            m,
            t_max,
            timestamps,
            labels,
            offsets,
            versions,
            pool,
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.to_bytes())?;
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_to(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut bytes = Vec::new();
        File::open(path)?.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }
}

impl ComponentIndex for CtmsfIndex {
    fn n(&self) -> u32 {
        self.n
    }

    fn t_max(&self) -> Timestamp {
        self.t_max
    }

    fn labels(&self) -> &[String] {
        &self.labels
    }

    fn serialized_len(&self) -> usize {
        CtmsfIndex::serialized_len(self)
    }

    fn query_with_stats(&self, q: Query) -> Result<(ComponentResult, QueryStats)> {
        let started = Instant::now();
        self.check_query(q)?;
        let mut stats = QueryStats::default();
        let mut seen = vec![false; self.n as usize];
        let mut queue = VecDeque::from([q.u]);
        let mut vertices = Vec::new();
        seen[q.u as usize] = true;
        while let Some(u) = queue.pop_front() {
            stats.binary_searches += 1;
            for x in self.incident_at(u, q.ts)? {
                if x.core_time.within(q.te) {
                    stats.nodes_visited += 1;
                    if !seen[x.other as usize] {
                        seen[x.other as usize] = true;
                        queue.push_back(x.other);
                    }
                }
            }
            vertices.push(u);
        }
        // a lone query vertex has no slice edge, so it is not in the core
        if vertices.len() == 1 {
            vertices.clear();
        }
        stats.elapsed = started.elapsed();
        Ok((ComponentResult::from_unsorted(vertices), stats))
    }
}
