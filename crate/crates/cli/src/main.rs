use clap::Parser;
use odesurf_cli::{execute, Cli, EXIT_ERROR};
use std::io::Write;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share exit status 1 with spec errors; 2 means "not converged"
            std::process::exit(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    let out = execute(&cli);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
