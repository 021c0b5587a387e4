//! Historical temporal k-core component search.
//!
//! Given a temporal graph, an integer `k`, a vertex `u` and a window
//! `[ts, te]`, find the connected component containing `u` in the k-core of
//! the graph projected onto the window. [`ecb::build`] precomputes an index
//! for one `k`; [`query::query`] then answers arbitrary windows by a search
//! whose cost is proportional to the answer.
//!
//! ```
//! use pecb::{build, load_edge_list_str, ComponentIndex, Query};
//!
//! let (g, _) = load_edge_list_str("a b 1\nb c 1\na c 2\nc d 3\n")?;
//! let (index, _report) = build(&g, 2)?;
//! let u = g.vertex_by_label("a")?;
//! let answer = index.query(Query::new(u, 1, 2))?;
//! assert_eq!(answer.len(), 3);
//! # Ok::<(), pecb::Error>(())
//! ```

pub mod bench;
mod binio;
pub mod cli;
pub mod coretime;
pub mod ctmsf;
pub mod ecb;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod query;
pub mod verify;

pub use coretime::{all_edge_core_times, CoreTime, CoreTimeTable};
pub use ctmsf::{build_ctmsf, ctmsf_query, CtmsfIndex};
pub use ecb::{build, PecbIndex};
pub use error::{Error, Result};
pub use graph::{load_edge_list, load_edge_list_str, TemporalGraph, TimeWindow, Timestamp, VertexId};
pub use oracle::{tccs_oracle, ComponentResult};
pub use query::{batch_query, query, ComponentIndex, Query};
