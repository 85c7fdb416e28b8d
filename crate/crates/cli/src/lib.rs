// SPDX-License-Identifier: Apache-2.0

//! Command-line front end of `thermowit-core`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use args::Cli;
pub use commands::{execute, Emission};
pub use error::{CliError, CliResult};

/// Runs a command and delivers its output: the document goes to `--out`
/// (atomically) or stdout, the summary line to stdout.
pub fn run(cli: &Cli) -> CliResult<()> {
    let em = execute(cli)?;
    match &em.out {
        Some(path) => output::write_atomic(path, &em.document)?,
        None => print!("{}", em.document),
    }
    if let Some(s) = &em.summary {
        print!("{s}");
    }
    Ok(())
}
