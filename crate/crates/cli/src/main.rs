use std::process::ExitCode;

fn main() -> ExitCode {
    catoptrics_cli::main_with(std::env::args_os())
}
