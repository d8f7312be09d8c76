use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite (pivot {index} is {pivot})")]
    NotPositiveDefinite { index: usize, pivot: String },
    #[error("matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("prime {p} is not admissible: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("weight functions live on different base lattices")]
    BaseMismatch,
    #[error("nontrivial weights can only be evaluated on the base lattice of the genus")]
    UnsupportedWeightTransport,
    #[error("cycle ring cutoffs differ ({0} vs {1})")]
    CutoffMismatch(usize, usize),
    #[error("grade {grade} exceeds the cutoff {cutoff}")]
    GradeAboveCutoff { grade: usize, cutoff: usize },
    #[error("subspace of dimension {dim} does not fit in grade {grade}")]
    SubspaceTooLarge { dim: usize, grade: usize },
    #[error("genus class functions belong to different genera")]
    GenusMismatch,
    #[error("class is not homogeneous")]
    NotHomogeneous,
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
