use std::process::ExitCode;

fn main() -> ExitCode {
    curvlab::app::main_with(std::env::args_os())
}
