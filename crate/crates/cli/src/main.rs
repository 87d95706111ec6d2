use std::io::Write;

fn main() {
    let (code, report) = stablin_cli::run_command(std::env::args_os().skip(1));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(report.as_bytes());
    let _ = stdout.flush();
    std::process::exit(code);
}
