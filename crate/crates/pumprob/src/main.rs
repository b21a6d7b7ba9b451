use std::process::ExitCode;

fn main() -> ExitCode {
    pumprob::cli::run()
}
