use std::process::ExitCode;

fn main() -> ExitCode {
    charsense::cli::run()
}
