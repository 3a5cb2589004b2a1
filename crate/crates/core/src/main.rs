use std::process::ExitCode;

use schmidt_lens::cli;

fn main() -> ExitCode {
    if let Err(msg) = cli::configure_threads_from_env() {
        eprintln!("error: {msg}");
        return ExitCode::from(cli::EXIT_USAGE as u8);
    }
    ExitCode::from(cli::run(std::env::args_os()) as u8)
}
