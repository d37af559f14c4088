use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(locuskit::cli::run_main() as u8)
}
