use std::process::ExitCode;

use clap::Parser;
use qkmedians_cli::{emit, run_command, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run_command(&cli.command).and_then(|outcome| {
        emit(
            &outcome,
            cli.command.output(),
            cli.command.histogram(),
            &mut std::io::stdout().lock(),
        )
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qkmedians: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
