use thiserror::Error;

use crate::quiver::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("arrows `{0}` and `{1}` are not composable")]
    NotComposable(String, String),
    #[error("arrow sequence is not closed")]
    NotClosed,
    #[error("empty arrow sequence")]
    EmptyCycle,
    #[error("loop `{0}` at an unfrozen vertex")]
    HasLoops(String),
    #[error("2-cycle between vertices {0} and {1}")]
    HasTwoCycles(VertexId, VertexId),
    #[error("arrow `{0}` has nonzero degree; the cluster layer needs degree-0 arrows")]
    GradedArrow(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("pair is not admissible: {0}")]
    NotAdmissible(String),
    #[error("folded entry ({row}, {col}) depends on the column representative")]
    NotWellDefined { row: VertexId, col: VertexId },
    #[error("{0} is not an unfrozen column key")]
    FrozenDirection(VertexId),
    #[error("orbit of {0} is frozen")]
    FrozenOrbit(VertexId),
    #[error("orbit mutation at {0} depends on the order of its members")]
    OrderDependent(VertexId),
    #[error("failure after prefix {prefix:?}: {source}")]
    AtPrefix { prefix: Vec<VertexId>, source: Box<Error> },
    #[error("stabilizer of {0} is non-abelian and no character table was supplied")]
    NonAbelianStabilizer(VertexId),
    #[error("invalid character table: {0}")]
    InvalidCharacterTable(String),
    #[error("potential is not invariant under the group action")]
    NotInvariant,
    #[error("potential is not homogeneous of degree {expected}")]
    DegreeMismatch { expected: i32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("chain map fails on generator `{generator}`: residual {residual}")]
    ChainMapFailure { generator: String, residual: String },
    #[error("Laurent division is not exact")]
    NonExactDivision,
    #[error("point counts {counts:?} do not fit a polynomial of degree <= {degree_bound}")]
    NonPolynomialCount {
        counts: Vec<(u64, u64)>,
        degree_bound: usize,
    },
    #[error("enumeration budget of {0} exceeded")]
    Budget(u64),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("linear algebra failure: {0}")]
    Linear(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation failed: {0}")]
    Validation(String),
}

impl Error {
    pub fn at_prefix(prefix: &[VertexId], source: Error) -> Self {
        Error::AtPrefix {
            prefix: prefix.to_vec(),
            source: Box::new(source),
        }
    }

    /// Innermost error, unwrapping prefix context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPrefix { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    /// Short machine-readable name used in JSON error bodies.
    pub fn kind(&self) -> &'static str {
        match self.root() {
            Error::UnknownVertex(_) => "UnknownVertex",
            Error::UnknownArrow(_) => "UnknownArrow",
            Error::DuplicateId(_) => "DuplicateId",
            Error::InvalidQuiver(_) => "InvalidQuiver",
            Error::NotComposable(..) => "NotComposable",
            Error::NotClosed => "NotClosed",
            Error::EmptyCycle => "EmptyCycle",
            Error::HasLoops(_) => "HasLoops",
            Error::HasTwoCycles(..) => "HasTwoCycles",
            Error::GradedArrow(_) => "GradedArrow",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::InvalidAction(_) => "InvalidAction",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::NotWellDefined { .. } => "NotWellDefined",
            Error::FrozenDirection(_) => "FrozenDirection",
            Error::FrozenOrbit(_) => "FrozenOrbit",
            Error::OrderDependent(_) => "OrderDependent",
            Error::AtPrefix { .. } => "AtPrefix",
            Error::NonAbelianStabilizer(_) => "NonAbelianStabilizer",
            Error::InvalidCharacterTable(_) => "InvalidCharacterTable",
            Error::NotInvariant => "NotInvariant",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::Unsupported(_) => "Unsupported",
            Error::ChainMapFailure { .. } => "ChainMapFailure",
            Error::NonExactDivision => "NonExactDivision",
            Error::NonPolynomialCount { .. } => "NonPolynomialCount",
            Error::Budget(_) => "Budget",
            Error::InvalidRepresentation(_) => "InvalidRepresentation",
            Error::Linear(_) => "Linear",
            Error::Parse { .. } => "ParseError",
            Error::Validation(_) => "ValidationError",
        }
    }
}
