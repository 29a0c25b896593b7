use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus {0} rejected: the grading modulus must be odd and at least 3 (2 does not divide n)")]
    InvalidModulus(u64),

    #[error("residues with different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),

    #[error("index sequence must be nonempty")]
    EmptySequence,

    #[error("index sequence of length {0} is too long for exhaustive enumeration")]
    SequenceTooLong(usize),

    #[error("sequence {0:?} is (-1)-dependent; the dependency set is defined only for independent sequences")]
    DependentSequence(Vec<u64>),

    #[error("generating set is empty")]
    EmptyGeneratingSet,

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator `{0}` has degree 0, but the presentation kills the zero component")]
    ZeroDegreeGenerator(String),

    #[error("fine degree must have total length at least 1")]
    EmptyFineDegree,

    #[error("fine degree of length {length} exceeds the cutoff {cutoff}")]
    BeyondCutoff { length: usize, cutoff: usize },

    #[error("element is not fine-degree homogeneous; split it into homogeneous parts first")]
    Inhomogeneous,

    #[error("cutoff must be at least 1")]
    InvalidCutoff,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid structure constants: {0}")]
    InvalidAlgebra(String),

    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error(
        "eigenspace decomposition incomplete: components span {found} of {expected} dimensions"
    )]
    IncompleteDecomposition { found: usize, expected: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("computation budget of {0:.1}s exceeded")]
    BudgetExceeded(f64),

    #[error("invalid check configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
