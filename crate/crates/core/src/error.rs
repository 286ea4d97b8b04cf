use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GkmError {
    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("division by the zero linear form")]
    ZeroLinearForm,
    #[error("matrix is singular")]
    Singular,
    #[error("too many variables: {0} (limit {1})")]
    TooManyVariables(usize, usize),
    #[error("invalid Hessenberg function {values:?}: {reason}")]
    InvalidHessenberg { values: Vec<usize>, reason: String },
    #[error("n = {n} exceeds the size guard {limit}")]
    SizeGuard { n: usize, limit: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("vertex `{0}` is not a permutation in one-line notation")]
    NotAPermutation(String),
    #[error("h = {0:?} is not invariant under the anti-diagonal flip, so the involution is not an automorphism")]
    StarConditionFails(Vec<usize>),
    #[error("axial function is not of full rank")]
    NotFullRank,
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("class does not belong to this graph: {0}")]
    ClassMismatch(String),
    #[error("invalid index pair ({0}, {1})")]
    InvalidIndexPair(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = GkmError> = std::result::Result<T, E>;
