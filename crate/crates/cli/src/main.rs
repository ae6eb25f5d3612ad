use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(oam_cli::run(std::env::args_os()))
}
