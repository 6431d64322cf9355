use thiserror::Error;

/// Every failure the library can report.
///
/// The variants fall into four groups that the CLI maps onto exit codes:
/// malformed input, violated preconditions, exhausted budgets and failed
/// internal verification. See [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("p-adic precision mismatch: {left} vs {right} digits")]
    PrecisionMismatch { left: u32, right: u32 },

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("denominator of {0} is divisible by the ring prime")]
    DenominatorNotUnit(String),

    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("quadratic has no suitable root in the ring")]
    NotSolvable,

    #[error("{0} is not a square")]
    NotASquare(String),

    #[error("2 is not a unit in {0}")]
    CharTwo(String),

    #[error("not a simple root: {0}")]
    NotSimpleRoot(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("witness verification failed: {0}")]
    WitnessVerificationFailed(String),

    #[error("internal verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    /// Short stable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RingMismatch { .. } => "ring-mismatch",
            Error::PrecisionMismatch { .. } => "precision-mismatch",
            Error::NotAUnit(_) => "not-a-unit",
            Error::Parse { .. } => "parse",
            Error::DenominatorNotUnit(_) => "denominator-not-unit",
            Error::InvalidSpec(_) => "invalid-spec",
            Error::NotInvertible => "not-invertible",
            Error::PreconditionViolated(_) => "precondition-violated",
            Error::NotSolvable => "not-solvable",
            Error::NotASquare(_) => "not-a-square",
            Error::CharTwo(_) => "char-two",
            Error::NotSimpleRoot(_) => "not-simple-root",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::WitnessVerificationFailed(_) => "witness-verification-failed",
            Error::Verification(_) => "verification",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RingMismatch { .. }
            | Error::PrecisionMismatch { .. }
            | Error::Parse { .. }
            | Error::DenominatorNotUnit(_)
            | Error::InvalidSpec(_) => 2,
            Error::NotAUnit(_)
            | Error::NotInvertible
            | Error::PreconditionViolated(_)
            | Error::NotSolvable
            | Error::NotASquare(_)
            | Error::CharTwo(_)
            | Error::NotSimpleRoot(_) => 3,
            Error::BudgetExceeded(_) => 4,
            Error::WitnessVerificationFailed(_) | Error::Verification(_) => 5,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
