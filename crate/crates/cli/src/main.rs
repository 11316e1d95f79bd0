use std::process::ExitCode;

use clap::Parser;
use tetra_census_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut std::io::stdin().lock(), &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tetra-census: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
