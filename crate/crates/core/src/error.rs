use alloc::string::String;

use crate::graded_graph::ValidationReport;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("depth must be at least 1")]
    ZeroDepth,

    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("level {level} out of range (graph has {depth} levels)")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("no vertex with index {index} at level {level}")]
    IndexOutOfRange { level: usize, index: usize },

    #[error("{from} (level {from_level}) does not precede {to} (level {to_level})")]
    LevelOrder {
        from: String,
        from_level: usize,
        to: String,
        to_level: usize,
    },

    #[error("enumeration would produce {count} paths, cap is {cap}")]
    CapExceeded { count: String, cap: usize },

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("paths are not tail-equivalent: {0}")]
    NotTailEquivalent(String),

    #[error("missing cotransition row for {0}")]
    MissingRow(String),

    #[error("row of {vertex}: {reason}")]
    BadRow { vertex: String, reason: String },

    #[error("initial distribution: {0}")]
    BadInitial(String),

    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(String),

    #[error("graph is not the {0} graph")]
    WrongGraph(&'static str),

    #[error("objects refer to different graphs")]
    GraphMismatch,

    #[error("vertex {0} is not reachable from level 0")]
    Unreachable(String),

    #[error("cotransition row of {0} is unspecified")]
    UnspecifiedRow(String),

    #[error("boundary sequence has no vertex at level {0}")]
    NoBoundaryVertex(usize),

    #[error("invalid letter distribution: {0}")]
    BadLetterDistribution(String),

    #[error("empty sample")]
    EmptySample,

    #[error("sampled paths have unequal lengths")]
    UnequalLengths,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
