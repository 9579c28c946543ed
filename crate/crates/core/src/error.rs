use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid simplex {0:?}: vertices must be distinct and nonempty")]
    InvalidSimplex(Vec<usize>),

    #[error("degree {degree} out of range (complex has dimension {dim})")]
    DegreeOutOfRange { degree: i64, dim: i64 },

    #[error("chain is not supported on the expected complex: {0}")]
    ComplexMismatch(String),

    #[error("invalid multiplicity k = {0}")]
    InvalidMultiplicity(usize),

    #[error("projection index {index} out of range 1..={k}")]
    InvalidIndex { index: usize, k: usize },

    #[error("chain is not alternating: {0}")]
    NotAlternating(String),

    #[error("matrices do not compose to zero ({0})")]
    NotAComplex(String),

    #[error("second subgroup is not contained in the first")]
    NotASubgroup,

    #[error("truncation p_max = {p_max} is insufficient for E^{r}_{{{p},{q}}}")]
    TruncationInsufficient { r: i64, p: i64, q: i64, p_max: i64 },

    #[error("invalid simplicial map: {0}")]
    InvalidMap(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
