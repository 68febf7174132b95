use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let response = emtkit_cli::run_command(std::env::args_os(), &mut std::io::stdin());
    print!("{}", response.stdout);
    eprint!("{}", response.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(response.code as u8)
}
