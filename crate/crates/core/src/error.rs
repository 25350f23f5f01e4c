use thiserror::Error;

/// A syntax error in forest or expression text, with a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }

    pub fn shifted(mut self, offset: usize) -> Self {
        self.position += offset;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCap { requested: usize, cap: usize },
    #[error("length mismatch: {0} coefficients for {1} elements")]
    LengthMismatch(usize, usize),
    #[error("natural growth needs a second argument without a degree-0 component")]
    EmptyGrowthTarget,
    #[error("element is not primitive: {0}")]
    NotPrimitive(String),
    #[error("primitive degree of zero is undefined")]
    ZeroElement,
    #[error("missing map u_{0}")]
    MissingMap(usize),
    #[error("incomplete primitive family: p_({0},{1}) is missing")]
    IncompleteFamily(usize, usize),
    #[error("character mismatch: {0}")]
    CharacterMismatch(String),
    #[error("tree of degree {degree} exceeds the scaling bound {bound}")]
    OversizedTree { degree: usize, bound: usize },
    #[error("element is not group-like up to degree {0}")]
    NotGroupLike(usize),
    #[error("unknown verification suite {0:?}")]
    UnknownSuite(String),
    #[error("singular graded matrix at degree {0}")]
    Singular(usize),
    #[error("input outside the expected space: {0}")]
    Domain(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
