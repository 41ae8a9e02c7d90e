//! Library side of the `catoptrics` command: argument grammar, scene files,
//! diagnostics, SVG figures and artifact writers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod diag;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

/// Parses `argv`, runs the command and reports the outcome on stderr.
pub fn main_with<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let err = diag::from_clap(&e);
            eprintln!("{}", err.render());
            return err.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global()
        {
            let err = diag::CliError::usage("--threads", e.to_string());
            eprintln!("{}", err.render());
            return err.exit_code();
        }
    }
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.render());
            err.exit_code()
        }
    }
}
