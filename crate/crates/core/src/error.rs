use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("identical circles")]
    IdenticalCircles,
    #[error("point does not lie on both circles")]
    PointNotOnCircles,
    #[error("invalid circle: {0}")]
    InvalidCircle(String),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("genericity violation: {0}")]
    GenericityViolation(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("point outside region")]
    PointOutsideRegion,
    #[error("unknown edge: {0}")]
    UnknownEdge(String),

    #[error("no candidate anchor point on the target edge")]
    NoCandidatePoint,
    #[error("no candidate point pair on the target edge")]
    NoCandidatePair,
    #[error("search budget exceeded after {iterations} iterations")]
    SearchBudgetExceeded { iterations: usize },
    #[error("x-window unsatisfiable: {0}")]
    WindowUnsatisfiable(String),
    #[error("CaseInapplicable: {0}")]
    CaseInapplicable(String),
    #[error("arc pair not found: {0}")]
    ArcPairNotFound(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("replay diverged at step {step}: {reason}")]
    ReplayDivergence { step: usize, reason: String },

    #[error("invalid grammar parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("tree is not in the family: {0}")]
    NotInFamily(String),
    #[error("geometric search failed at step {step}: {reason}")]
    GeometricSearchFailed { step: usize, reason: String },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid algebraic model spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
