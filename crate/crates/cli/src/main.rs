use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let window = std::env::var(decnum::DEGREE_WINDOW_VAR).ok();
    let out = decnum::main_entry(std::env::args_os(), window.as_deref());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
