use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by quiver construction, parsing and the analysis pipeline.
///
/// Vertex indices carried by variants are 0-based; `Display` renders them
/// 1-based so messages match the user-facing formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("conflicting edge between vertices {} and {}", .0 + 1, .1 + 1)]
    ConflictingEdge(usize, usize),

    #[error("loop forbidden at vertex {}", .0 + 1)]
    LoopForbidden(usize),

    #[error("vertex {} out of range for a quiver on {n} vertices", .vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("a quiver needs at least one vertex")]
    NoVertices,

    #[error("edge weight must be positive")]
    NonPositiveWeight,

    #[error("expected {expected} labels or coordinates, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("vertex set must be nonempty")]
    EmptyVertexSet,

    #[error("vertex {} listed twice", .0 + 1)]
    DuplicateVertex(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid JSON quiver at {path}: {message}")]
    Json { path: String, message: String },

    #[error("{operation} supports at most {limit} vertices, got {n}")]
    TooManyVertices {
        operation: &'static str,
        limit: usize,
        n: usize,
    },

    #[error("invalid caps: {0}")]
    InvalidCaps(String),

    #[error("undecided: {0}")]
    Unknown(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("quiver is not of finite mutation type")]
    NotFiniteType,

    #[error("subset scan needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("unknown reference quiver {0:?}")]
    UnknownReference(String),

    #[error("internal consistency check failed: {0}")]
    TheoremViolation(String),

    #[error("catalog cache {path}: {message}")]
    Cache { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable identifier, used by the HTTP layer.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ConflictingEdge(..) => "conflicting_edge",
            Error::LoopForbidden(_) => "loop_forbidden",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::NoVertices => "no_vertices",
            Error::NonPositiveWeight => "non_positive_weight",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::EmptyVertexSet => "empty_vertex_set",
            Error::DuplicateVertex(_) => "duplicate_vertex",
            Error::Parse { .. } => "parse_error",
            Error::Json { .. } => "invalid_quiver_json",
            Error::TooManyVertices { .. } => "too_many_vertices",
            Error::InvalidCaps(_) => "invalid_caps",
            Error::Unknown(_) => "caps_exceeded",
            Error::Hypothesis(_) => "hypothesis_violated",
            Error::NotFiniteType => "not_finite_type",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::UnknownReference(_) => "unknown_reference",
            Error::TheoremViolation(_) => "theorem_violation",
            Error::Cache { .. } => "cache_error",
            Error::Io(_) => "io_error",
        }
    }
}
