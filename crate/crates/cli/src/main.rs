use std::io::{self, Write};
use std::process::ExitCode;

use chi_audit::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(chi_audit::CliError::Output));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chi-audit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
