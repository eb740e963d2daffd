use thiserror::Error;

/// Failure kinds shared by every module of the workbench.
///
/// The variants are split so that a front end can tell an invalid request
/// apart from a request that is too large to run and from a mathematical
/// expectation that did not hold.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is well formed but exceeds an enumeration bound.
    #[error("infeasible size: {0}")]
    Infeasible(String),

    /// A computed identity did not hold.
    #[error("check failed: {0}")]
    CheckFailed(String),

    /// A coefficient was requested outside the validity window of a truncated series.
    #[error("coefficient t^{t} u^({u_times_2}/2) lies outside the validity window (valid from u^({valid_from}/2))")]
    OutsideWindow {
        t: usize,
        u_times_2: i64,
        valid_from: i64,
    },

    /// A table lookup missed, typically a class of a length that was not enumerated.
    #[error("missing data: {0}")]
    Missing(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn infeasible(msg: impl Into<String>) -> Error {
    Error::Infeasible(msg.into())
}
