use std::io;

use thiserror::Error;

use crate::graph::{Timestamp, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("timestamps must be positive before indexing (found t = 0); normalize first")]
    ZeroTimestamp,

    #[error("invalid window [{ts}, {te}] for t_max = {t_max}")]
    InvalidWindow { ts: Timestamp, te: Timestamp, t_max: Timestamp },

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: VertexId, n: u32 },

    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),

    #[error("unknown edge id {0}")]
    UnknownEdge(u32),

    #[error("unknown forest node {0}")]
    UnknownNode(u32),

    #[error("k must be at least 1")]
    InvalidK,

    #[error("query {index} in batch: {source}")]
    BatchQuery {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("index file: {0}")]
    Format(String),

    #[error("index invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}
