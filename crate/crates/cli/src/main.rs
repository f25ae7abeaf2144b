use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (out, code) = shiftsem_cli::run(std::env::args_os());
    if code == 0 {
        let _ = std::io::stdout().write_all(out.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(out.as_bytes());
    }
    ExitCode::from(code as u8)
}
