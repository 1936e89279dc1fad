use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("operation requires d = {required}, got d = {actual}")]
    Dimension { required: usize, actual: usize },

    #[error("velocity is not divergence free (spectral divergence {residual:.3e} relative to |u|_2)")]
    NotDivergenceFree { residual: f64 },

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("CFL violated: dt = {dt:.3e} exceeds admissible {admissible:.3e}")]
    Cfl { dt: f64, admissible: f64 },

    #[error("velocity history covers [0, {covered}] but [0, {requested}] was requested (missing segment ({covered}, {requested}])")]
    HistoryGap { covered: f64, requested: f64 },

    #[error("non-finite state at step {step}")]
    NumericalAbort { step: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("`{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status: 2 for usage, configuration and input problems,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonFinite { .. } | Error::NumericalAbort { .. } | Error::Cfl { .. } => 3,
            _ => 2,
        }
    }

    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
