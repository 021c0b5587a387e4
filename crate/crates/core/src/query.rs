//! Component search over a built index.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::ecb::{NodeId, PecbIndex};
use crate::error::{Error, Result};
use crate::graph::{Timestamp, VertexId};
use crate::oracle::ComponentResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Query {
    pub u: VertexId,
    pub ts: Timestamp,
    pub te: Timestamp,
}

impl Query {
    pub fn new(u: VertexId, ts: Timestamp, te: Timestamp) -> Self {
        Query { u, ts, te }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub nodes_visited: usize,
    pub binary_searches: usize,
    pub elapsed: Duration,
}

/// Anything that answers component queries; lets benchmarks and the CLI
/// treat both index kinds alike.
pub trait ComponentIndex: Sync {
    fn n(&self) -> u32;
    fn t_max(&self) -> Timestamp;
    fn labels(&self) -> &[String];
    fn serialized_len(&self) -> usize;
    fn query_with_stats(&self, q: Query) -> Result<(ComponentResult, QueryStats)>;

    fn query(&self, q: Query) -> Result<ComponentResult> {
        self.query_with_stats(q).map(|(r, _)| r)
    }

    fn check_query(&self, q: Query) -> Result<()> {
        if q.u >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: q.u, n: self.n() });
        }
        if q.ts == 0 || q.ts > q.te || q.te > self.t_max() {
            return Err(Error::InvalidWindow {
                ts: q.ts,
                te: q.te,
                t_max: self.t_max(),
            });
        }
        Ok(())
    }
}

impl ComponentIndex for PecbIndex {
    fn n(&self) -> u32 {
        PecbIndex::n(self)
    }

    fn t_max(&self) -> Timestamp {
        PecbIndex::t_max(self)
    }

    fn labels(&self) -> &[String] {
        PecbIndex::labels(self)
    }

    fn serialized_len(&self) -> usize {
        PecbIndex::serialized_len(self)
    }

    fn query_with_stats(&self, q: Query) -> Result<(ComponentResult, QueryStats)> {
        let started = Instant::now();
        self.check_query(q)?;
        let mut stats = QueryStats {
            binary_searches: 1,
            ..QueryStats::default()
        };
        // If u is in the core of [ts, te], some edge of the slice B_ts|<=te is
        // incident to u, so the lowest-ranked incident node passes the filter.
        // If that node fails it, u has no slice edge and is not in the core.
        let Some(start) = self.entry_node_at(q.u, q.ts)? else {
            stats.elapsed = started.elapsed();
            return Ok((ComponentResult::empty(), stats));
        };
        if !self.node(start)?.core_time.within(q.te) {
            stats.elapsed = started.elapsed();
            return Ok((ComponentResult::empty(), stats));
        }
        let mut visited: HashSet<NodeId> = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        let mut vertices = Vec::new();
        while let Some(x) = queue.pop_front() {
            let node = self.node(x)?;
            vertices.push(node.u);
            vertices.push(node.v);
            stats.binary_searches += 1;
            let Some(entry) = self.neighbors_at(x, q.ts)? else {
                return Err(Error::Invariant(format!("reached node {x} without an entry at ts {}", q.ts)));
            };
            for y in entry.links().neighbors() {
                // children pass by heap order; checked anyway
                if self.node(y)?.core_time.within(q.te) && visited.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        stats.nodes_visited = visited.len();
        stats.elapsed = started.elapsed();
        Ok((ComponentResult::from_unsorted(vertices), stats))
    }
}

pub fn query(idx: &(impl ComponentIndex + ?Sized), q: Query) -> Result<ComponentResult> {
    idx.query(q)
}

pub fn query_with_stats(idx: &(impl ComponentIndex + ?Sized), q: Query) -> Result<(ComponentResult, QueryStats)> {
    idx.query_with_stats(q)
}

fn check_batch<I: ComponentIndex + ?Sized>(idx: &I, queries: &[Query]) -> Result<()> {
    for (index, &q) in queries.iter().enumerate() {
        idx.check_query(q).map_err(|e| Error::BatchQuery {
            index,
            source: Box::new(e),
        })?;
    }
    Ok(())
}

/// Answers every query, positionally aligned with the input. With
/// `workers > 1` the queries run on a dedicated thread pool.
pub fn batch_query_with_stats<I: ComponentIndex + ?Sized>(
    idx: &I,
    queries: &[Query],
    workers: usize,
) -> Result<Vec<(ComponentResult, QueryStats)>> {
    check_batch(idx, queries)?;
    let run = |i: usize| {
        idx.query_with_stats(queries[i]).map_err(|e| Error::BatchQuery {
            index: i,
            source: Box::new(e),
        })
    };
    if workers <= 1 {
        return (0..queries.len()).map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    pool.install(|| (0..queries.len()).into_par_iter().map(run).collect())
}

pub fn batch_query<I: ComponentIndex + ?Sized>(idx: &I, queries: &[Query], workers: usize) -> Result<Vec<ComponentResult>> {
    Ok(batch_query_with_stats(idx, queries, workers)?.into_iter().map(|(r, _)| r).collect())
}
