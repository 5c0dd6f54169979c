use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use primetuples_cli::output::render;
use primetuples_cli::{run, ExperimentConfig};

fn main() -> ExitCode {
    let config = match ExperimentConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = config.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} workers: {e}");
            return ExitCode::from(1);
        }
    }
    let report = run(&config);
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    print!("{}", render(&report, config.format));
    ExitCode::from(report.status.exit_code() as u8)
}
