use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Non-finite intermediate values are reported as errors rather than being
/// returned to callers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("separatrix singularity at s = {s}: |xi/xi'| = {ratio:e}")]
    SeparatrixSingularity { s: String, ratio: f64 },

    #[error("no return to the section within {limit:e} flow-time units")]
    NoReturn { limit: f64 },

    #[error("degenerate zero: |xi'(rho)| = {0:e}")]
    DegenerateZero(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Coarse classification used by command-line front ends to pick exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Pole(_)
            | Error::Domain(_)
            | Error::Singularity(_)
            | Error::SeparatrixSingularity { .. }
            | Error::DegenerateZero(_) => ErrorKind::Domain,
            Error::Convergence(_) | Error::StepSizeUnderflow { .. } | Error::NoReturn { .. } => {
                ErrorKind::Convergence
            }
            Error::Config(_) => ErrorKind::Usage,
            Error::Format { .. } | Error::Io(_) => ErrorKind::Io,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Domain,
    Convergence,
    Io,
}
