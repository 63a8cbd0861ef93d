//! Command-line front end: problem configs, the `f(x)` expression parser,
//! subcommand dispatch and result files.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

pub use commands::Cli;
pub use config::{Mode, ProblemConfig};
pub use error::{exit, CliError};
pub use expr::{parse_expression, Expression, SyntaxError};
pub use output::Report;

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT } else { exit::SUCCESS };
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
