//! Binary index file. All integers little-endian; `u32::MAX` encodes both
//! "no node" and an infinite core time.
//!
//! ```text
//! magic "PECBIDX\0" | version u8 | 3 reserved bytes
//! k n m t_max                                   u32 x 4
//! timestamp count, node count, entry count, entry point count   u64 x 4
//! timestamps                                     u32 each
//! nodes: edge u v core_time created retired      u32 x 6 each
//! entry offsets (nodes + 1), entries: start left right parent
//! entry point offsets (n + 1), entry points: start node
//! labels (n): byte length u32, UTF-8 bytes
//! ```

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{EntryPoint, ForestNode, NodeId, PecbIndex, VersionedEntry};
use crate::binio::{check_offsets, check_timestamps, from_opt, labels_len, opt, put_labels, put_u32, put_u64, Reader, NONE};
use crate::coretime::CoreTime;
use crate::error::{Error, Result};

const MAGIC: &[u8; 8] = b"PECBIDX\0";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 8 + 4 + 16 + 32;

impl PecbIndex {
    pub fn serialized_len(&self) -> usize {
        HEADER_LEN
            + 4 * self.timestamps.len()
            + 24 * self.nodes.len()
            + 4 * (self.nodes.len() + 1)
            + 16 * self.entries.len()
            + 4 * (self.n as usize + 1)
            + 8 * self.entry_points.len()
            + labels_len(&self.labels)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.serialized_len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&[VERSION, 0, 0, 0]);
        for x in [self.k, self.n, self.m, self.t_max] {
            put_u32(&mut out, x);
        }
        for c in [self.timestamps.len(), self.nodes.len(), self.entries.len(), self.entry_points.len()] {
            put_u64(&mut out, c as u64);
        }
        for &t in &self.timestamps {
            put_u32(&mut out, t);
        }
        for x in &self.nodes {
            for f in [x.edge, x.u, x.v, x.core_time.to_raw(), x.created, opt(x.retired)] {
                put_u32(&mut out, f);
            }
        }
        for &o in &self.entry_offsets {
            put_u32(&mut out, o);
        }
        for e in &self.entries {
            for f in [e.start, opt(e.left), opt(e.right), opt(e.parent)] {
                put_u32(&mut out, f);
            }
        }
        for &o in &self.entry_point_offsets {
            put_u32(&mut out, o);
        }
        for p in &self.entry_points {
            put_u32(&mut out, p.start);
            put_u32(&mut out, opt(p.node));
        }
        put_labels(&mut out, &self.labels);
        debug_assert_eq!(out.len(), self.serialized_len());
        out
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

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(8, "magic")? != MAGIC {
            return Err(Error::Format("not a PECB index file".into()));
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
        let node_count = r.count("node", 24)?;
        let entry_count = r.count("entry", 16)?;
        let point_count = r.count("entry point", 8)?;
        if k == 0 {
            return Err(Error::Format("k is zero".into()));
        }
        if node_count >= NONE as usize {
            return Err(Error::Format("too many nodes".into()));
        }

        let timestamps = r.u32s(ts_count, "timestamps")?;
        check_timestamps(&timestamps, t_max)?;

        let raw = r.u32s(node_count * 6, "nodes")?;
        let mut nodes = Vec::with_capacity(node_count);
        for f in raw.chunks_exact(6) {
            let node = ForestNode {
                edge: f[0],
                u: f[1],
                v: f[2],
                core_time: CoreTime::from_raw(f[3]),
                created: f[4],
                retired: from_opt(f[5]),
            };
            if node.edge >= m || node.u >= node.v || node.v >= n {
                return Err(Error::Format(format!("node {} has bad edge fields", nodes.len())));
            }
            if !node.core_time.is_finite() || node.created == 0 || node.created > t_max {
                return Err(Error::Format(format!("node {} has bad times", nodes.len())));
            }
            if node.retired.is_some_and(|t| t == 0 || t > node.created) {
                return Err(Error::Format(format!("node {} retired out of range", nodes.len())));
            }
            nodes.push(node);
        }
        if nodes.windows(2).any(|w| w[0].rank() >= w[1].rank()) {
            return Err(Error::Format("node ids not in rank order".into()));
        }

        let valid_node = |x: Option<NodeId>| x.is_none_or(|id| (id as usize) < node_count);

        let entry_offsets = r.u32s(node_count + 1, "entry offsets")?;
        check_offsets(&entry_offsets, entry_count, "entry")?;
        let raw = r.u32s(entry_count * 4, "entries")?;
        let entries: Vec<VersionedEntry> = raw
            .chunks_exact(4)
            .map(|f| VersionedEntry {
                start: f[0],
                left: from_opt(f[1]),
                right: from_opt(f[2]),
                parent: from_opt(f[3]),
            })
            .collect();
        for w in entry_offsets.windows(2) {
            let list = &entries[w[0] as usize..w[1] as usize];
            if list.windows(2).any(|p| p[0].start <= p[1].start) {
                return Err(Error::Format("entry starts not decreasing".into()));
            }
            if list
                .iter()
                .any(|e| !(valid_node(e.left) && valid_node(e.right) && valid_node(e.parent)))
            {
                return Err(Error::Format("entry links an unknown node".into()));
            }
        }

        let entry_point_offsets = r.u32s(n as usize + 1, "entry point offsets")?;
        check_offsets(&entry_point_offsets, point_count, "entry point")?;
        let raw = r.u32s(point_count * 2, "entry points")?;
        let entry_points: Vec<EntryPoint> = raw
            .chunks_exact(2)
            .map(|f| EntryPoint {
                start: f[0],
                node: from_opt(f[1]),
            })
            .collect();
        for w in entry_point_offsets.windows(2) {
            let list = &entry_points[w[0] as usize..w[1] as usize];
            if list.windows(2).any(|p| p[0].start <= p[1].start) || list.iter().any(|p| !valid_node(p.node)) {
                return Err(Error::Format("bad entry point list".into()));
            }
        }

        let labels = r.labels(n)?;
        r.finish()?;
        Ok(PecbIndex::assemble(
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
        ))
    }
}
