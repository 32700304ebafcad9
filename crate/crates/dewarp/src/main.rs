use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(dewarp::cli::main_with_args(std::env::args_os()))
}
