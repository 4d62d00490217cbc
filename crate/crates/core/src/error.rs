use thiserror::Error;

/// Errors raised across the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not a physical state: {0}")]
    NonPhysical(String),

    #[error("channel is not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("invalid ion index {0} (expected 1 or 2)")]
    InvalidIon(u8),

    #[error("invalid pulse: {0}")]
    InvalidPulse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("missing tomography setting {0}")]
    MissingSetting(String),

    #[error("record for setting {0} has zero shots")]
    ZeroShots(String),

    #[error("degenerate phase grid: {0}")]
    DegeneratePhases(String),

    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no root in bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Configuration and input problems map to exit code 1, numerical failures to 2.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonPhysical(_)
                | Error::NotTracePreserving { .. }
                | Error::DegeneratePhases(_)
                | Error::FitFailed(_)
                | Error::NoConvergence { .. }
                | Error::NoRoot { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
