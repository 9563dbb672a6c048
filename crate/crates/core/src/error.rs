use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: String },

    #[error("argument {0} lies on the branch cut [1, inf) and no side was given")]
    BranchCut(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("divergent iterated integral: {0}")]
    Divergent(String),

    #[error("coupling {0} is at or below the existence threshold -1/pi")]
    Threshold(f64),

    #[error("invalid mu^2 policy: {0}")]
    Policy(String),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("J is not monotone: {0}")]
    Monotonicity(String),

    #[error("poor fit: {0}")]
    FitQuality(String),

    #[error("tail did not converge: {0}")]
    TailNonConvergence(String),

    #[error("order {0} exceeds the supported maximum of 10")]
    Order(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn non_convergence(what: &'static str, detail: impl Into<String>) -> Error {
    Error::NonConvergence {
        what,
        detail: detail.into(),
    }
}
