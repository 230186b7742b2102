use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use kcmp_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let outcome = run(&config);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.report.as_bytes());
    let _ = stdout.flush();
    for line in &outcome.diagnostics {
        eprintln!("{line}");
    }
    ExitCode::from(outcome.code)
}
