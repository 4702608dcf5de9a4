//! Error type shared by every module of the core crate.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures are grouped into the three categories the command line maps onto
/// exit codes: bad input, refusal to exceed a resource cap, and a numerical
/// series whose truncation error is too large to use.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a precondition (sizes, ranges, lengths).
    InvalidInput(String),
    /// A computation would exceed a configured cap.
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
        suggestion: &'static str,
    },
    /// A truncated enumerator was evaluated where its tail bound exceeds the
    /// accepted tolerance.
    TruncationTooLarge { bound: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::CapExceeded {
                what,
                requested,
                cap,
                suggestion,
            } => write!(
                f,
                "{what} of {requested} exceeds the cap of {cap}; {suggestion}"
            ),
            Error::TruncationTooLarge { bound, tolerance } => write!(
                f,
                "truncated series tail bound {bound:e} exceeds tolerance {tolerance:e}"
            ),
        }
    }
}

impl core::error::Error for Error {}
