use std::process::ExitCode;

use clap::Parser;
use lexcut_cli::cli::Cli;
use lexcut_cli::commands::{run, EXIT_ERROR};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which here means "infeasible".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
