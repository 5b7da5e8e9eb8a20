//! Binary entry point: forwards the process arguments and standard
//! streams to [`tailkit_cli::run_command`] and exits with its code.

use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let code = tailkit_cli::run_command(
        &argv,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
