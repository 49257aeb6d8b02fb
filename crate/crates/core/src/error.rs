use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("config error: {0}")]
    Config(String),

    #[error("position {0} outside the truncation window")]
    OutOfWindow(i64),

    #[error("label support beyond truncation depth {0}")]
    DepthExceeded(usize),

    #[error("window too small: {0}")]
    WindowLimited(String),

    #[error("walk endpoints do not match for concatenation")]
    EndpointMismatch,

    #[error("lift undefined: {0}")]
    LiftUndefined(String),

    #[error("hypothesis audit failed: {0}")]
    HypothesisFailed(String),

    #[error("law mismatch: {0}")]
    LawMismatch(String),

    #[error("points are not connected within the support")]
    Disconnected,

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Invalid(String),
}
