use clap::Parser;
use lsd::cli::Cli;
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, error) = match lsd::run(&cli) {
        Ok(r) => (r.stdout, r.error),
        Err(e) => (String::new(), Some(e)),
    };
    let mut out = std::io::stdout().lock();
    if out.write_all(stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    match error {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("lsd: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
