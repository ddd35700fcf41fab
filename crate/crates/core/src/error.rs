// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the samplers, estimators and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("operation not defined in the Porter-Thomas limit regime (n = {qubits})")]
    UnsupportedRegime { qubits: u64 },

    #[error("{what}: {requested} qubits exceeds the cap of {cap}")]
    Capacity {
        what: &'static str,
        requested: u64,
        cap: u64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("malformed record: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by how the tool was invoked rather than by a failure while running.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::UnsupportedRegime { .. }
                | Error::Capacity { .. }
                | Error::InvalidArgument(_)
                | Error::EmptyInput(_)
        )
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        match err.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse(format!("{other:?}")),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
