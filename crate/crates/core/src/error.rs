use thiserror::Error;

/// Errors raised by the algebra and model layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("cannot compose: substituted series for `{0}` has a nonzero constant term")]
    NonzeroConstantTerm(String),

    #[error("implicit equation is not uniquely solvable at degree {degree}: {reason}")]
    Structural { degree: usize, reason: String },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid formal group law: {0}")]
    InvalidFgl(String),

    #[error("operation requires a Q-algebra coefficient ring")]
    NotRational,

    #[error("degree {degree} exceeds the ring bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },

    #[error("unknown line bundle `{0}`")]
    UnknownBundle(String),

    #[error("unregistered map: {0}")]
    UnregisteredMap(String),

    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconsistent face lattice: {0}")]
    InconsistentLattice(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DomainMismatch(..) => "domain_mismatch",
            Error::VariableMismatch(_) => "variable_mismatch",
            Error::NonzeroConstantTerm(_) => "nonzero_constant_term",
            Error::Structural { .. } => "structural",
            Error::OutOfRange(_) => "out_of_range",
            Error::InvalidFgl(_) => "invalid_fgl",
            Error::NotRational => "not_rational",
            Error::DegreeOverflow { .. } => "degree_overflow",
            Error::UnknownBundle(_) => "unknown_bundle",
            Error::UnregisteredMap(_) => "unregistered_map",
            Error::TheoryMismatch(_) => "theory_mismatch",
            Error::Unsupported(_) => "unsupported",
            Error::InconsistentLattice(_) => "inconsistent_lattice",
            Error::Parse(_) => "parse",
        }
    }
}
