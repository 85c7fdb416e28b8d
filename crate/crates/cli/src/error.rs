// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] thermowit_core::Error),

    /// Bad flag value or config entry.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 0 ok, 1 output I/O, 2 input validation, 3 infeasible problem, 4 solver failure.
    pub fn exit_code(&self) -> i32 {
        use thermowit_core::Error as E;
        match self {
            CliError::Input(_) => 2,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::Validation(_) | E::Dimension(_) | E::Domain(_) => 2,
                E::Infeasible { .. } => 3,
                E::Numerical(_) | E::FixedPoint { .. } | E::Truncation { .. } => 4,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}
