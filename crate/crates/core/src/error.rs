use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("({0}, {1}) is not in the index set of the partial basis")]
    NotInLambda(i64, i64),

    #[error("field has nonzero divergence {0}")]
    NonzeroDivergence(String),

    #[error("not certified locally nilpotent within bound {0}")]
    NotLocallyNilpotent(usize),

    #[error("not certified unipotent within bound {0}")]
    NotUnipotent(usize),

    #[error("no invariant subspace within degree cap {0}")]
    DegreeCapExceeded(usize),

    #[error("span is not closed under the bracket")]
    NotClosed,

    #[error("Lie algebra is not solvable")]
    NotSolvable,

    #[error("cannot split over the rationals: {0}")]
    NotSplittable(String),

    #[error("field is not diagonal on monomials: {0}")]
    NonDiagonal(String),

    #[error("fields do not commute")]
    NonCommuting,

    #[error("closure did not terminate: {0}")]
    ClosureCapExceeded(String),

    #[error("map is not in the S-invariant subgroup: {0}")]
    NotSInvariant(String),

    #[error("no limit: monomial {monomial} in component {component} has t-exponent {exponent}")]
    NoLimit { component: usize, monomial: String, exponent: i64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable name used in the CLI error envelope.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::Parse { .. } => "parse",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NotAutomorphism(_) => "not_an_automorphism",
            Error::NotInLambda(..) => "not_in_lambda",
            Error::NonzeroDivergence(_) => "nonzero_divergence",
            Error::NotLocallyNilpotent(_) => "not_locally_nilpotent",
            Error::NotUnipotent(_) => "not_unipotent",
            Error::DegreeCapExceeded(_) => "degree_cap_exceeded",
            Error::NotClosed => "not_closed",
            Error::NotSolvable => "not_solvable",
            Error::NotSplittable(_) => "not_splittable",
            Error::NonDiagonal(_) => "non_diagonal",
            Error::NonCommuting => "non_commuting",
            Error::ClosureCapExceeded(_) => "closure_caps_exceeded",
            Error::NotSInvariant(_) => "not_s_invariant",
            Error::NoLimit { .. } => "no_limit",
            Error::Internal(_) => "internal",
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
