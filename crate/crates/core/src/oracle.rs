//! Ground truth straight from the definitions: project, peel, search. Slow
//! on purpose; nothing here shares code with the index.

use crate::coretime::CoreTime;
use crate::error::{Error, Result};
use crate::graph::{connected_components, peel_k_core, EdgeId, StaticGraph, TemporalGraph, TimeWindow, VertexId};

/// Vertices of one temporal k-core component, sorted. Empty when the query
/// vertex is not in the core.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ComponentResult {
    pub vertices: Vec<VertexId>,
}

impl ComponentResult {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        ComponentResult { vertices }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, u: VertexId) -> bool {
        self.vertices.binary_search(&u).is_ok()
    }

    pub fn is_subset_of(&self, other: &ComponentResult) -> bool {
        self.vertices.iter().all(|&u| other.contains(u))
    }
}

pub fn temporal_k_core(g: &TemporalGraph, k: u32, w: TimeWindow) -> StaticGraph {
    peel_k_core(&g.project(w), k)
}

pub fn tccs_oracle(g: &TemporalGraph, k: u32, u: VertexId, w: TimeWindow) -> Result<ComponentResult> {
    if u >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: u, n: g.n() });
    }
    let core = temporal_k_core(g, k, w);
    if !core.contains(u) {
        return Ok(ComponentResult::empty());
    }
    let found = connected_components(&core)
        .into_iter()
        .find(|c| c.binary_search(&u).is_ok())
        .expect("core vertex lies in some component");
    Ok(ComponentResult { vertices: found })
}

/// Every component of the window's core, for sweeps that check all vertices
/// of one window at once. `owner[u]` indexes into the returned list.
pub fn window_components(g: &TemporalGraph, k: u32, w: TimeWindow) -> (Vec<ComponentResult>, Vec<Option<usize>>) {
    let comps = connected_components(&temporal_k_core(g, k, w));
    let mut owner = vec![None; g.n() as usize];
    for (i, c) in comps.iter().enumerate() {
        for &u in c {
            owner[u as usize] = Some(i);
        }
    }
    let comps = comps.into_iter().map(|vertices| ComponentResult { vertices }).collect();
    (comps, owner)
}

/// Earliest `te >= ts` whose window contains the edge and whose k-core
/// contains both endpoints; infinity if there is none.
pub fn edge_core_time_oracle(g: &TemporalGraph, k: u32, edge: EdgeId, ts: u32) -> Result<CoreTime> {
    let e = *g.edge(edge)?;
    if ts == 0 || ts > g.t_max() {
        return Err(Error::InvalidWindow {
            ts,
            te: g.t_max(),
            t_max: g.t_max(),
        });
    }
    if e.t < ts {
        return Ok(CoreTime::INFINITY);
    }
    // candidate end times are the edge timestamps; membership only changes there
    for &te in g.timestamps().iter().filter(|&&t| t >= e.t) {
        let core = temporal_k_core(g, k, TimeWindow { ts, te });
        if core.contains(e.u) && core.contains(e.v) {
            return Ok(CoreTime::finite(te));
        }
    }
    Ok(CoreTime::INFINITY)
}
