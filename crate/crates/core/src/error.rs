use thiserror::Error;

/// Errors raised by model construction, window handling and the exploration algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge set is not a spanning tree on {n} vertices: {reason}")]
    NotSpanning { n: usize, reason: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} outside [1, {n}]")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("model catalog is empty")]
    EmptyCatalog,
    #[error("tree {0} has zero probability mass")]
    ZeroMass(usize),
    #[error("invalid probability mass for tree {0}")]
    InvalidMass(usize),
    #[error("expected {expected} masses, got {got}")]
    MassCountMismatch { expected: usize, got: usize },
    #[error("trees {0} and {1} are identical")]
    DuplicateTree(usize, usize),
    #[error("tree {index} has {found} vertices, expected {expected}")]
    MixedVertexCounts { index: usize, expected: usize, found: usize },

    #[error("invalid time range [{t0}, {t1}]")]
    InvalidRange { t0: u64, t1: u64 },
    #[error("tree index {0} not in catalog")]
    UnknownTree(usize),
    #[error("window ends at {have}, need snapshots up to {need}")]
    WindowTooShort { need: u64, have: u64 },
    #[error("window was not sampled from a seed and cannot be extended")]
    NotExtendable,
    #[error("source set is empty")]
    EmptySources,

    #[error("source {0} is not in the context set")]
    SourceNotInContext(usize),
    #[error("context set already contains every vertex")]
    ContextFull,

    #[error("no schedule completed by time {0}")]
    HorizonExceeded(u64),
    #[error("policy {policy} moved from {from} to {to} at time {time}, which is not an edge")]
    PolicyIllegalMove { policy: String, time: u64, from: usize, to: usize },
    #[error("snapshot {0} is not a star")]
    NotAStarSnapshot(usize),
    #[error("model is not a ladder")]
    NotLadderModel,

    #[error("instance too large for exact search: {0}")]
    TooLarge(String),
    #[error("graph has more than {0} spanning trees")]
    TooManyTrees(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("centre sequence holds {found} birthday intervals, need {needed}")]
    SequenceTooShort { needed: usize, found: usize },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
