use thiserror::Error;

/// Errors raised by the toolkit. Each variant maps to a stable string code
/// (see [`Error::code`]) used by the command-line front end.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in matrix {0}")]
    NonFinite(&'static str),
    #[error("pencil is (numerically) singular")]
    SingularPencil,
    #[error("QZ iteration failed to converge")]
    IterationFailure,
    #[error("spectra of the diagonal blocks are not disjoint")]
    SpectraNotDisjoint,
    #[error("pencil is not stable for the requested time domain")]
    UnstablePair,
    #[error("evaluation point is a pole of the system")]
    EvalAtPole,
    #[error("similarity transformation is singular")]
    SingularTransform,
    #[error("system is not square")]
    NotSquare,
    #[error("transfer-function matrix is not invertible")]
    NotInvertibleTfm,
    #[error("feedthrough matrix D is singular")]
    SingularD,
    #[error("systems belong to different time domains")]
    DomainMismatch,
    #[error("zero denominator in rational entry ({0}, {1})")]
    ZeroDenominator(usize, usize),
    #[error("pole on the boundary of the splitting region")]
    PoleOnBoundary,
    #[error("invalid stability region: {0}")]
    RegionInvalid(String),
    #[error("eigenvalue placement failed: {0}")]
    PlacementFailure(String),
    #[error("system is improper")]
    ImproperInput,
    #[error("system is unstable")]
    UnstableInput,
    #[error("system has zeros on the stability boundary")]
    BoundaryZeros,
    #[error("rank-deficient factorization is not supported")]
    RankDeficiencyUnsupported,
    #[error("system is unstable")]
    UnstableSystem,
    #[error("continuous-time system is not strictly proper")]
    NonstrictlyProperContinuous,
    #[error("equation is incompatible (rank [G F] > rank G)")]
    Incompatible,
    #[error("unsupported problem shape: {0}")]
    UnsupportedShape(String),
    #[error("continuous-time F is not strictly proper")]
    NonstrictlyProperF,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "E_DIMENSION",
            Error::NonFinite(_) => "E_NONFINITE",
            Error::SingularPencil => "E_SINGULAR_PENCIL",
            Error::IterationFailure => "E_ITERATION",
            Error::SpectraNotDisjoint => "E_SPECTRA_NOT_DISJOINT",
            Error::UnstablePair => "E_UNSTABLE_PAIR",
            Error::EvalAtPole => "E_EVAL_AT_POLE",
            Error::SingularTransform => "E_SINGULAR_TRANSFORM",
            Error::NotSquare => "E_NOT_SQUARE",
            Error::NotInvertibleTfm => "E_NOT_INVERTIBLE",
            Error::SingularD => "E_SINGULAR_D",
            Error::DomainMismatch => "E_DOMAIN",
            Error::ZeroDenominator(..) => "E_ZERO_DENOMINATOR",
            Error::PoleOnBoundary => "E_POLE_ON_BOUNDARY",
            Error::RegionInvalid(_) => "E_REGION",
            Error::PlacementFailure(_) => "E_PLACEMENT",
            Error::ImproperInput => "E_IMPROPER",
            Error::UnstableInput => "E_UNSTABLE_INPUT",
            Error::BoundaryZeros => "E_BOUNDARY_ZEROS",
            Error::RankDeficiencyUnsupported => "E_RANK_DEFICIENT",
            Error::UnstableSystem => "E_UNSTABLE",
            Error::NonstrictlyProperContinuous => "E_NOT_STRICTLY_PROPER",
            Error::Incompatible => "E_INCOMPATIBLE",
            Error::UnsupportedShape(_) => "E_UNSUPPORTED_SHAPE",
            Error::NonstrictlyProperF => "E_F_NOT_STRICTLY_PROPER",
            Error::Parse { .. } => "E_PARSE",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
