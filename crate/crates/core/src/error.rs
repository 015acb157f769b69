use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty coefficient list")]
    EmptyInput,
    #[error("polynomial evaluates to {value} at 1; expected 1 or -1")]
    Normalization { value: i64 },
    #[error("Laurent coefficient list is not symmetric")]
    Asymmetric,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("torsion profile is not of L-space form")]
    NotLSpaceForm,
    #[error("{0} is out of range")]
    OutOfRange(String),
    #[error("stable coefficients are empty")]
    EmptyStableCoefficients,
    #[error("not a changemaker vector: {0:?}")]
    NotChangemaker(Vec<i64>),
    #[error("slope {slope} is below the minimum {minimum}")]
    SlopeTooSmall { slope: String, minimum: String },
    #[error("invalid slope {p}/{q}")]
    InvalidSlope { p: i64, q: i64 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("vector {index} does not lie in the lattice")]
    VectorNotInLattice { index: usize },
    #[error("expected {expected} vectors, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("vectors do not span the lattice")]
    NotSpanning,
    #[error("vectors {i} and {j} pair positively ({value})")]
    PositivePairing { i: usize, j: usize, value: i64 },
    #[error("vectors do not sum to zero")]
    NonzeroSum,
    #[error("coordinate outside {{-1, 0, 1}}")]
    CoordinateOutOfRange,
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("search space overflow: {what} exceeded cap {cap}")]
    SearchSpaceOverflow { what: String, cap: u64 },
    #[error("missing prerequisite: {0}")]
    PrerequisiteMissing(String),
    #[error("operation requires the {0} lattice flavor")]
    WrongFlavor(&'static str),
    #[error("graph is not planar")]
    NotPlanar,
    #[error("quick search was inconclusive at slope {slope}")]
    Inconclusive { slope: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
