//! Expected values for the eight-vertex example graph with k = 2.

/// Edge `(u, v, t)` and its `(start, core time)` list; `None` is infinity.
pub const CORE_TIMES: [(&str, &str, u32, &[(u32, Option<u32>)]); 11] = [
    ("v3", "v8", 2, &[(1, Some(5)), (3, None)]),
    ("v4", "v5", 3, &[(1, Some(6)), (4, None)]),
    ("v1", "v2", 4, &[(1, Some(4)), (5, None)]),
    ("v1", "v3", 4, &[(1, Some(4)), (5, None)]),
    ("v2", "v3", 4, &[(1, Some(4)), (5, None)]),
    ("v6", "v7", 4, &[(1, Some(5)), (5, None)]),
    ("v6", "v8", 5, &[(1, Some(5)), (5, None)]),
    ("v7", "v8", 5, &[(1, Some(5)), (5, None)]),
    ("v2", "v4", 6, &[(1, Some(6)), (4, None)]),
    ("v2", "v5", 6, &[(1, Some(6)), (4, Some(7)), (5, None)]),
    ("v5", "v6", 7, &[(1, Some(7)), (5, None)]),
];

/// One forest node: edge, core time, latest start time, and its entries as
/// `(start, left, right, parent)` with nodes numbered from 1 and 0 for none.
pub struct NodeRow {
    pub edge: (&'static str, &'static str, u32),
    pub core_time: u32,
    pub created: u32,
    pub entries: &'static [(u32, u32, u32, u32)],
}

pub const FOREST: [NodeRow; 12] = [
    NodeRow {
        edge: ("v1", "v2", 4),
        core_time: 4,
        created: 4,
        entries: &[(4, 0, 0, 2)],
    },
    NodeRow {
        edge: ("v1", "v3", 4),
        core_time: 4,
        created: 4,
        entries: &[(4, 1, 0, 11), (3, 1, 0, 9), (2, 1, 0, 4)],
    },
    NodeRow {
        edge: ("v2", "v3", 4),
        core_time: 4,
        created: 4,
        entries: &[],
    },
    NodeRow {
        edge: ("v3", "v8", 2),
        core_time: 5,
        created: 2,
        entries: &[(2, 2, 0, 6)],
    },
    NodeRow {
        edge: ("v6", "v7", 4),
        core_time: 5,
        created: 4,
        entries: &[(4, 0, 0, 6)],
    },
    NodeRow {
        edge: ("v6", "v8", 5),
        core_time: 5,
        created: 4,
        entries: &[(4, 5, 0, 12), (2, 5, 4, 9)],
    },
    NodeRow {
        edge: ("v7", "v8", 5),
        core_time: 5,
        created: 4,
        entries: &[],
    },
    NodeRow {
        edge: ("v4", "v5", 3),
        core_time: 6,
        created: 3,
        entries: &[(3, 0, 0, 9)],
    },
    NodeRow {
        edge: ("v2", "v4", 6),
        core_time: 6,
        created: 3,
        entries: &[(3, 2, 8, 12), (2, 6, 8, 0)],
    },
    NodeRow {
        edge: ("v2", "v5", 6),
        core_time: 6,
        created: 3,
        entries: &[],
    },
    NodeRow {
        edge: ("v2", "v5", 6),
        core_time: 7,
        created: 4,
        entries: &[(4, 2, 0, 12)],
    },
    NodeRow {
        edge: ("v5", "v6", 7),
        core_time: 7,
        created: 4,
        entries: &[(4, 11, 6, 0), (3, 9, 6, 0)],
    },
];
