use std::process::ExitCode;

use clap::Parser;
use diamlab::cli::{run, Cli, Outcome, EXIT_ORACLE_FAILURE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on usage errors and 0 for --help
            e.exit();
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::OracleFailed) => ExitCode::from(EXIT_ORACLE_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
