//! Small reference graphs shared by unit tests, integration tests, the FFI
//! tests and the CLI demo.

use crate::graph::{load_edge_list_str, TemporalGraph, VertexId};

/// Eight vertices `v1..v8`, eleven edges over timestamps 2..=7.
pub const EXAMPLE_EDGE_LIST: &str = "\
# u v t
v3 v8 2
v4 v5 3
v1 v2 4
v1 v3 4
v2 v3 4
v6 v7 4
v6 v8 5
v7 v8 5
v2 v4 6
v2 v5 6
v5 v6 7
";

pub fn example_graph() -> TemporalGraph {
    load_edge_list_str(EXAMPLE_EDGE_LIST).expect("example edge list parses").0
}

/// Dense id of label `v{i}` in [`example_graph`].
pub const fn v(i: u32) -> VertexId {
    i - 1
}
