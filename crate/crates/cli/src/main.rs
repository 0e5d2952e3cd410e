use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lzwalk_cli::execute(std::env::args_os()))
}
