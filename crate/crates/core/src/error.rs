use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::matcore::CMat;

/// State of an iterative solver at the point where it gave up.
#[derive(Debug, Clone)]
pub struct NonConvergence {
    /// What was being solved.
    pub what: &'static str,
    /// Objective value reached at the last iterate.
    pub last_objective: f64,
    /// Last iterate (solver-specific; covariances for water-filling).
    pub last_covariances: Vec<CMat>,
}

/// Errors produced by the library.
#[derive(Debug, Clone)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidInput(String),
    /// A stream allocation violates a transmit, receive or alignment bound.
    InfeasibleAllocation(String),
    /// A channel draw lacked the generic rank needed by a construction.
    DegenerateChannel(String),
    /// An iterative solver did not reach its tolerance within the iteration cap.
    NonConvergence(Box<NonConvergence>),
    /// A numerical operation failed (non-positive pivot, sweep limit, ...).
    NumericalFailure(String),
    /// An inconsistent simulation or front-end configuration.
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::InfeasibleAllocation(msg) => write!(f, "infeasible allocation: {msg}"),
            Error::DegenerateChannel(msg) => write!(f, "degenerate channel: {msg}"),
            Error::NonConvergence(info) => write!(
                f,
                "{} did not converge (last objective {})",
                info.what, info.last_objective
            ),
            Error::NumericalFailure(msg) => write!(f, "numerical failure: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
