use std::process::ExitCode;

use clap::Parser;
use wilfpoly_cli::{run, Cli, EXIT_OK, EXIT_VERIFICATION};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(&cli) {
        Ok(outcome) => {
            if json {
                println!("{}", outcome.report.to_json());
            } else {
                println!("{}", outcome.to_text());
            }
            let code = if outcome.report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            };
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
