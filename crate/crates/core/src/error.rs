use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("image {point} appears more than once; not a bijection")]
    NotABijection { point: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("bad cycle notation `{text}`: {reason}")]
    CycleSyntax { text: String, reason: String },
    #[error("group closure exceeded the order cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("generator file: {0}")]
    GeneratorFile(String),
}

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("inadmissible parameters k={k}, v={v}: {reason}")]
    Inadmissible { k: usize, v: usize, reason: String },
    #[error("design line parse error at column {column}: {reason}")]
    Parse { column: usize, reason: String },
    #[error("design failed verification: {0}")]
    Unverified(String),
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("node cap of {cap} exceeded after {found} candidates")]
    NodeCapExceeded { cap: u64, found: usize },
    #[error("declared orbit structure {declared} does not match actual {actual}")]
    OrbitMismatch { declared: String, actual: String },
    #[error("search config: {0}")]
    Config(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("point count {v} exceeds the configured bound {bound}")]
    BoundExceeded { v: usize, bound: usize },
    #[error("designs have different parameters: ({v1},{k1}) vs ({v2},{k2})")]
    ParamMismatch { v1: usize, k1: usize, v2: usize, k2: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{q} is not a prime power")]
    NotAPrimePower { q: usize },
    #[error("field order {q} exceeds the supported bound {bound}")]
    OrderTooLarge { q: usize, bound: usize },
    #[error("construction needs {needed} mutually orthogonal Latin squares, got {got}")]
    NotEnoughSquares { needed: usize, got: usize },
    #[error("squares {a} and {b} are not orthogonal")]
    NotOrthogonal { a: usize, b: usize },
    #[error("Latin square invariant violated: {0}")]
    NotLatin(String),
    #[error("parameter mismatch: {0}")]
    Mismatch(String),
}
