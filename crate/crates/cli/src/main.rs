use std::process::ExitCode;

fn main() -> ExitCode {
    gme_cli::run(std::env::args_os())
}
