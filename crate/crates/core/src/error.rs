use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("order {0} is too small: a triple system needs at least 3 points")]
    OrderTooSmall(u32),
    #[error("order {0} inadmissible: a Steiner triple system exists only when u mod 6 is 1 or 3")]
    Inadmissible(u32),
    #[error("triple has repeated point {0}")]
    RepeatedPoint(u32),
    #[error("point {point} is out of range for order {order}")]
    PointOutOfRange { point: u32, order: u32 },
    #[error("not a Steiner triple system: {0}")]
    InvalidSystem(String),
    #[error("search bound exceeded after {nodes} nodes (limit {limit})")]
    BoundExceeded { nodes: u64, limit: u64 },
    #[error("brute force search is limited to orders up to {max}, got {order}")]
    OracleTooLarge { order: u32, max: u32 },
    #[error("resolvable variants need u ≡ 3 (mod 6), got u = {0}")]
    NotResolvableOrder(u32),
    #[error("no resolvable system found after {attempts} attempts")]
    NoResolvableFound { attempts: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterchangeError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl InterchangeError {
    pub(crate) fn at(path: impl Into<String>, message: impl Into<String>) -> Self {
        InterchangeError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("expected {expected} vertex labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("triangle {index} is degenerate or out of range: {detail}")]
    BadTriangle { index: usize, detail: String },
    #[error("overlapping edges: {}", .0.join(", "))]
    OverlappingEdges(Vec<String>),
    #[error("uncovered edges: {}", .0.len())]
    UncoveredEdges(Vec<String>),
    #[error("unknown export format {0:?}; supported formats: dot, tikz, json")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeywordError {
    #[error("need at least 3 keywords, got {0}")]
    TooFew(usize),
    #[error("keyword {0} is empty")]
    Empty(usize),
    #[error("keyword {0:?} is not a single word")]
    NotSingleWord(String),
    #[error("duplicate keywords: {}", .0.join(", "))]
    Duplicate(Vec<String>),
    #[error("order {0} inadmissible")]
    Inadmissible(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaffoldError {
    #[error(transparent)]
    Keywords(#[from] KeywordError),
    #[error(transparent)]
    Design(#[from] DesignError),
}
