use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("shape mismatch: expected {expected} values, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid window: end {end} must exceed start {start}")]
    InvalidWindow { start: f64, end: f64 },

    #[error("ellipticity violated at node {node}: a11 = {value} < alpha0 = {alpha0}")]
    EllipticityViolation {
        node: usize,
        value: f64,
        alpha0: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("positivity lost at t = {time}: {reason}")]
    PositivityLoss { time: f64, reason: String },

    #[error("tridiagonal solve failed: {0}")]
    Solver(String),

    #[error("time alignment: {0}")]
    Alignment(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("second direction collapsed at t = {time}")]
    RankLoss { time: f64 },

    #[error("floquet oracle failed: {0}")]
    OracleFailure(String),

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("positivity violated at node {node}: value {value}")]
    PositivityViolation { node: usize, value: f64 },

    #[error("configuration rejected:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
