use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed cycle notation: {0}")]
    MalformedCycle(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {0} is outside the supported range 1..=16")]
    DegreeOutOfRange(usize),
    #[error("point {point} is outside 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: u128 },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not a Sylow subgroup: order {actual}, expected {expected}")]
    NotSylow { actual: u64, expected: u64 },
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("the base vertex has no parent")]
    BaseHasNoParent,
    #[error("malformed vertex address: {0}")]
    MalformedAddress(String),
    #[error("subtree is not complete: {0}")]
    NotComplete(String),
    #[error("subtree is not prefix-closed: {0}")]
    NotASubtree(String),
    #[error("incompatible local actions on the edge {vertex} --{color}--")]
    IncompatibleLocalActions { vertex: String, color: usize },
    #[error("missing local action at {0}")]
    MissingSigma(String),
    #[error("vertex {0} is outside the domain")]
    OutsideDomain(String),
    #[error("radius exhausted: {0}")]
    RadiusExhausted(String),
    #[error("tower violation: {0}")]
    TowerViolation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no obstruction found: {0}")]
    NoObstruction(String),
    #[error("leaf count mismatch: {0} vs {1}")]
    LeafCountMismatch(usize, usize),
    #[error("invalid leaf map: {0}")]
    InvalidLeafMap(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
