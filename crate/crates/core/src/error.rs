use thiserror::Error;

/// Errors raised while building, parsing or analysing graphs.
///
/// Node ids in messages are 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Error> },

    #[error("loop at node {node} is not allowed in {mode} mode")]
    LoopForbidden { node: usize, mode: &'static str },

    #[error("negative weight {weight}")]
    NegativeWeight { weight: f64 },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("node {id} out of range 1..={n}")]
    NodeOutOfRange { id: usize, n: usize },

    #[error("node {0} repeated in triple")]
    RepeatedNode(usize),

    #[error("digraph is not symmetric: arc ({from}, {to}) has no reverse")]
    Asymmetric { from: usize, to: usize },

    #[error("need at least {required} nodes, graph has {n}")]
    TooFewNodes { n: usize, required: usize },

    #[error("triad must have exactly 3 nodes, got {0}")]
    NotATriad(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid JSON graph: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        match self {
            Error::Malformed { .. } | Error::AtLine { .. } => self,
            other => Error::AtLine {
                line,
                source: Box::new(other),
            },
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
