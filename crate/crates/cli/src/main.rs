mod args;
mod config;
mod run;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use treemax_core::Error;

use crate::args::Cli;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARAMETER: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_DIVERGENCE: u8 = 4;

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let mut cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Some(path) = cli.global.config.clone() {
        if let Err(msg) = config::load(&path).and_then(|c| config::apply(&mut cli, &matches, &c)) {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_PARAMETER);
        }
    }
    if let Some(digits) = cli.global.precision_digits {
        if let Err(e) = treemax_core::numerics::set_precision_digits(digits) {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARAMETER);
        }
    }
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARAMETER);
        }
    }
    match run::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(Error::Divergence(msg)) if cli.global.expect_divergence => {
            println!("divergent: {msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => EXIT_RESOURCE,
                Error::Divergence(_) => EXIT_DIVERGENCE,
                Error::Io(_) => EXIT_CHECK_FAILED,
                _ => EXIT_PARAMETER,
            })
        }
    }
}
