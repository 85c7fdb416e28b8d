// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::Parser;
use thermowit_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match std::env::var("THERMOWIT_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                eprintln!("thermowit: THERMOWIT_THREADS must be a nonnegative integer, got `{v}`");
                return ExitCode::from(2);
            }
        },
        Err(_) => 0,
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("thermowit: cannot start worker threads: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thermowit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
