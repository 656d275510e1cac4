use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("invalid quiver: {0}")]
    BadQuiver(String),

    #[error("bad relation: {0}")]
    BadRelation(String),

    #[error("ideal does not contain all paths of any length up to {cap}")]
    NotFiniteDimensional { cap: usize },

    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("morphism is not injective")]
    NotInjective,

    #[error("field too small: p = {prime} but the endomorphism ring has dimension {dim}")]
    FieldTooSmall { prime: u32, dim: usize },

    #[error("summand with dimension vector {dims:?} has residue field of degree {degree} over F_p")]
    NonSplit { dims: Vec<usize>, degree: usize },

    #[error("module is not indecomposable")]
    NotIndecomposable,

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("rad^3 of the algebra is nonzero (nilpotency degree {degree})")]
    RadCubeNotZero { degree: usize },

    #[error("Ext-projective system did not converge within {cap} passes at index {index}")]
    EpssNotConverged { index: usize, cap: usize },

    #[error("validation failed: {0}")]
    ValidationFailed(String),

    #[error("no Ext-projective cover found: {0}")]
    CoverNotFound(String),

    #[error("three infinite-dimension indices need a 3-finitistic or 3-cardinal assumption")]
    MissingAssumption,

    #[error("an Ext-projective system is required")]
    MissingEpss,

    #[error("syntax error at line {line}, column {column}: expected {expected}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
    },

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("unknown corpus entry `{0}`")]
    UnknownCorpusName(String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("missing context: {0}")]
    MissingContext(String),
}

impl Error {
    /// Stable machine-readable code used in JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::BadQuiver(_) => "bad_quiver",
            Error::BadRelation(_) => "bad_relation",
            Error::NotFiniteDimensional { .. } => "not_finite_dimensional",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::AlgebraMismatch => "algebra_mismatch",
            Error::InvalidModule(_) => "invalid_module",
            Error::NotInjective => "not_injective",
            Error::FieldTooSmall { .. } => "field_too_small",
            Error::NonSplit { .. } => "non_split",
            Error::NotIndecomposable => "not_indecomposable",
            Error::Undecided(_) => "undecided",
            Error::RadCubeNotZero { .. } => "rad_cube_not_zero",
            Error::EpssNotConverged { .. } => "epss_not_converged",
            Error::ValidationFailed(_) => "validation_failed",
            Error::CoverNotFound(_) => "cover_not_found",
            Error::MissingAssumption => "missing_assumption",
            Error::MissingEpss => "missing_epss",
            Error::Syntax { .. } => "syntax_error",
            Error::UnknownArrow(_) => "unknown_arrow",
            Error::UnknownCorpusName(_) => "unknown_corpus_name",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::MissingContext(_) => "missing_context",
        }
    }

    /// Errors that mean "not decided yet" rather than "bad input".
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Error::Undecided(_) | Error::CoverNotFound(_) | Error::ValidationFailed(_)
        )
    }

    /// Errors raised because a computational cap was hit.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::NotFiniteDimensional { .. } | Error::EpssNotConverged { .. } | Error::FieldTooSmall { .. }
        )
    }
}
