use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A finite negative-order q-Pochhammer factor sits at (or numerically on) a pole.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("zero argument: {0}")]
    ZeroArgument(String),

    #[error("pole in denominator: {0}")]
    PoleInDenominator(String),

    #[error("series diverges: {0}")]
    Divergence(String),

    /// Formal summation whose terms do not climb in q-order.
    #[error("series is not q-graded: {0}")]
    NonGradedSeries(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("convergence condition violated: {0}")]
    UnsatisfiedConvergence(String),

    /// Operation is not available in the selected backend.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Prefixes the message with the location of the failing subexpression.
    pub fn at(self, path: &str) -> Error {
        let wrap = |m: String| format!("{path}: {m}");
        match self {
            Error::DivisionByZero(m) => Error::DivisionByZero(wrap(m)),
            Error::ZeroArgument(m) => Error::ZeroArgument(wrap(m)),
            Error::PoleInDenominator(m) => Error::PoleInDenominator(wrap(m)),
            Error::Divergence(m) => Error::Divergence(wrap(m)),
            Error::NonGradedSeries(m) => Error::NonGradedSeries(wrap(m)),
            Error::InvalidParameter(m) => Error::InvalidParameter(wrap(m)),
            Error::DegenerateParameters(m) => Error::DegenerateParameters(wrap(m)),
            Error::UnsatisfiedConvergence(m) => Error::UnsatisfiedConvergence(wrap(m)),
            Error::Unsupported(m) => Error::Unsupported(wrap(m)),
            Error::Config(m) => Error::Config(wrap(m)),
            Error::Io(m) => Error::Io(wrap(m)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::ZeroArgument(_) => "ZeroArgument",
            Error::PoleInDenominator(_) => "PoleInDenominator",
            Error::Divergence(_) => "Divergence",
            Error::NonGradedSeries(_) => "NonGradedSeries",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::DegenerateParameters(_) => "DegenerateParameters",
            Error::UnsatisfiedConvergence(_) => "UnsatisfiedConvergence",
            Error::Unsupported(_) => "Unsupported",
            Error::Config(_) => "ConfigError",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
