use std::process::ExitCode;

fn main() -> ExitCode {
    grit::cli::run()
}
