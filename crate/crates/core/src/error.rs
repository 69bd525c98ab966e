use crate::rational::Rational;
use crate::setfn::SubsetMask;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input violated an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A ground set exceeds the cap for the requested operation.
    #[error("capacity error: {what} needs n <= {cap}, got n = {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    /// A coverage decomposition found a negative Möbius coefficient.
    #[error("not a coverage function: coefficient of subset {subset:#b} is {coefficient}")]
    NotCoverage {
        subset: SubsetMask,
        coefficient: Rational,
    },

    /// An iterative solver stopped before certifying its answer.
    #[error("solver error: {message} (best value {best_value}, lower bound {lower_bound})")]
    Solver {
        message: String,
        best_value: Rational,
        lower_bound: Rational,
    },

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A construction step that is infeasible only if the implementation is wrong.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
