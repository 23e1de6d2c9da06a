use std::process::ExitCode;

fn main() -> ExitCode {
    tensurf::cli::run()
}
